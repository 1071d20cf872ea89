"""Single-byte corruption harness.

Every mutant differs from a valid trusty file in exactly one byte. Only ASCII
letters and digits are replaced, always by a different letter or digit and
never by the same letter in the other case (some syntax keywords are
case-insensitive, so a case flip may not change the content).
"""

from __future__ import annotations

import random
import string
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import rdf
from .errors import RdfSyntaxError
from .report import CheckReport, Verdict

ALNUM = (string.ascii_letters + string.digits).encode("ascii")
_ALNUM_SET = frozenset(ALNUM)


@dataclass(frozen=True)
class Mutation:
    position: int
    old: int
    new: int


@dataclass
class MutationSpec:
    seed: int = 0

    def __post_init__(self):
        self._rng = random.Random(self.seed)

    def choose(self, data: bytes) -> Mutation:
        candidates = [i for i, b in enumerate(data) if b in _ALNUM_SET]
        if not candidates:
            raise ValueError("no letter or digit to mutate")
        pos = self._rng.choice(candidates)
        old = data[pos]
        forbidden = {old, ord(chr(old).swapcase())}
        new = self._rng.choice([b for b in ALNUM if b not in forbidden])
        return Mutation(pos, old, new)

    def mutate(self, data: bytes) -> tuple[bytes, Mutation]:
        m = self.choose(data)
        return data[: m.position] + bytes([m.new]) + data[m.position + 1 :], m

    def pick(self, items):
        return self._rng.choice(items)


@dataclass
class MutantResult:
    source: str
    mutation: Mutation
    verdict: Verdict
    # does the mutant still parse? None for non-RDF files
    parses: bool | None = None


@dataclass
class FuzzSummary:
    results: list[MutantResult] = field(default_factory=list)

    @property
    def counts(self) -> Counter:
        return Counter(r.verdict for r in self.results)

    def rate(self, verdict: Verdict) -> float:
        return 100.0 * self.counts[verdict] / len(self.results) if self.results else 0.0

    @property
    def false_valid(self) -> int:
        return self.counts[Verdict.VALID]

    def table(self) -> str:
        n = len(self.results)
        lines = [
            f"mutants  {n}",
            f"valid    {self.counts[Verdict.VALID]:>6}  {self.rate(Verdict.VALID):6.2f}%",
            f"invalid  {self.counts[Verdict.INVALID]:>6}  {self.rate(Verdict.INVALID):6.2f}%",
            f"error    {self.counts[Verdict.ERROR]:>6}  {self.rate(Verdict.ERROR):6.2f}%",
        ]
        broken = Counter((r.parses, r.verdict) for r in self.results if r.parses is not None)
        if broken:
            lines.append("by parseability (parses, verdict): " + ", ".join(
                f"{'parses' if p else 'syntax-broken'}/{v.value}={c}" for (p, v), c in sorted(
                    broken.items(), key=lambda kv: (str(kv[0][0]), kv[0][1].value))
            ))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "mutants": len(self.results),
            **{v.value: self.counts[v] for v in Verdict},
            **{f"{v.value}_pct": round(self.rate(v), 4) for v in Verdict},
        }


def _parses(path: Path) -> bool | None:
    try:
        fmt = rdf.guess_format(path)
    except ValueError:
        return None
    try:
        with open(path, "rb") as f:
            for _ in rdf.iter_quads(f, fmt):
                pass
    except RdfSyntaxError:
        return False
    return True


def fuzz_check(
    corpus_dir,
    n: int = 1000,
    seed: int = 0,
    checker: Callable[[Path], CheckReport] | None = None,
) -> FuzzSummary:
    """Check ``n`` single-byte mutants drawn from the trusty files in ``corpus_dir``."""
    if checker is None:
        from .commands import check_file as checker

    corpus = sorted(p for p in Path(corpus_dir).iterdir() if p.is_file())
    if not corpus:
        raise ValueError(f"no files in {corpus_dir}")
    contents = {p: p.read_bytes() for p in corpus}
    spec = MutationSpec(seed)
    summary = FuzzSummary()
    with tempfile.TemporaryDirectory(prefix="trustyuri-fuzz-") as tmp:
        target = Path(tmp)
        for i in range(n):
            src = spec.pick(corpus)
            data, mutation = spec.mutate(contents[src])
            # keep the original name: it carries the code being checked
            mutant_dir = target / str(i % 64)
            mutant_dir.mkdir(exist_ok=True)
            mutant = mutant_dir / src.name
            mutant.write_bytes(data)
            report = checker(mutant)
            summary.results.append(MutantResult(src.name, mutation, report.verdict, _parses(mutant)))
    return summary
