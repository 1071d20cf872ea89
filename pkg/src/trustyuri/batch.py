"""Batch execution: one command per line, run in a single process.

Grammar::

    # comment
    CheckFile        <path>
    ProcessFile      <path>
    TransformRdf     <path> <base-uri> [RA|RB]
    TransformLargeRdf <path> <base-uri> [RA|RB]
    CheckLargeRdf    <path>
    CheckSortedRdf   <path>

Verbs also accept kebab-case (``check-file``). Arguments are split with
shell-style quoting.
"""

from __future__ import annotations

import shlex
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .commands import check_file, transform_rdf_file
from .errors import TrustyUriError
from .fa import process_file
from .large import SortConfig, check_large_rdf, check_sorted_rdf, transform_large_rdf
from .report import Verdict


@dataclass
class BatchCommand:
    verb: str
    args: list[str]
    line: int = 0


def _transform(args, cfg, large):
    path, base = args[0], args[1]
    module = args[2] if len(args) > 2 else "RA"
    if large:
        return transform_large_rdf(path, base, module, cfg)
    return transform_rdf_file(path, base, module)


# verb -> (min args, max args)
ARITY = {
    "CheckFile": (1, 1),
    "ProcessFile": (1, 1),
    "TransformRdf": (2, 3),
    "TransformLargeRdf": (2, 3),
    "CheckLargeRdf": (1, 1),
    "CheckSortedRdf": (1, 1),
}
CHECK_VERBS = {"CheckFile", "CheckLargeRdf", "CheckSortedRdf"}


def canonical_verb(word: str) -> str | None:
    flat = word.replace("-", "").replace("_", "").lower()
    for verb in ARITY:
        if verb.lower() == flat:
            return verb
    return None


def parse_batch_line(line: str, lineno: int = 0) -> BatchCommand | None:
    """``None`` for blank and comment lines; ValueError when malformed."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    parts = shlex.split(stripped, comments=True)
    verb = canonical_verb(parts[0])
    if verb is None:
        raise ValueError(f"unknown command {parts[0]!r}")
    lo, hi = ARITY[verb]
    if not lo <= len(parts) - 1 <= hi:
        raise ValueError(f"{verb} takes {lo}-{hi} arguments, got {len(parts) - 1}")
    return BatchCommand(verb, parts[1:], lineno)


@dataclass
class BatchOutcome:
    line: int
    text: str
    verdict: Verdict
    message: str = ""

    def to_dict(self) -> dict:
        return {"line": self.line, "command": self.text, "verdict": self.verdict.value, "message": self.message}


@dataclass
class BatchSummary:
    outcomes: list[BatchOutcome] = field(default_factory=list)

    def count(self, verdict: Verdict) -> int:
        return sum(1 for o in self.outcomes if o.verdict is verdict)

    @property
    def exit_status(self) -> int:
        if self.count(Verdict.ERROR):
            return 2
        if self.count(Verdict.INVALID):
            return 1
        return 0

    def summary_line(self) -> str:
        return (
            f"valid {self.count(Verdict.VALID)} / invalid {self.count(Verdict.INVALID)}"
            f" / error {self.count(Verdict.ERROR)}"
        )


def execute(cmd: BatchCommand, cfg: SortConfig | None = None) -> tuple[Verdict, str]:
    try:
        if cmd.verb == "CheckFile":
            r = check_file(cmd.args[0])
        elif cmd.verb == "CheckLargeRdf":
            r = check_large_rdf(cmd.args[0], cfg=cfg)
        elif cmd.verb == "CheckSortedRdf":
            r = check_sorted_rdf(cmd.args[0])
        elif cmd.verb == "ProcessFile":
            return Verdict.VALID, str(process_file(cmd.args[0]))
        else:
            return Verdict.VALID, str(_transform(cmd.args, cfg, cmd.verb == "TransformLargeRdf"))
    except (TrustyUriError, OSError, ValueError) as e:
        return Verdict.ERROR, str(e)
    return r.verdict, r.message


def run_batch(batch_path, cfg: SortConfig | None = None, jobs: int = 1) -> BatchSummary:
    """Execute every command in order. With ``jobs > 1`` runs of consecutive
    check commands go through a thread pool; results keep file order."""
    items: list[tuple[int, str, BatchCommand | str]] = []
    for lineno, line in enumerate(Path(batch_path).read_text(encoding="utf-8").splitlines(), 1):
        try:
            cmd = parse_batch_line(line, lineno)
        except ValueError as e:
            items.append((lineno, line.strip(), str(e)))
            continue
        if cmd is not None:
            items.append((lineno, line.strip(), cmd))

    summary = BatchSummary()
    pool = ThreadPoolExecutor(jobs) if jobs > 1 else None
    try:
        i = 0
        while i < len(items):
            lineno, text, cmd = items[i]
            if isinstance(cmd, str):
                summary.outcomes.append(BatchOutcome(lineno, text, Verdict.ERROR, cmd))
                i += 1
                continue
            if pool is not None and cmd.verb in CHECK_VERBS:
                j = i
                while j < len(items) and not isinstance(items[j][2], str) and items[j][2].verb in CHECK_VERBS:
                    j += 1
                group = items[i:j]
                for (ln, tx, _), (verdict, msg) in zip(
                    group, pool.map(lambda it: execute(it[2], cfg), group)
                ):
                    summary.outcomes.append(BatchOutcome(ln, tx, verdict, msg))
                i = j
                continue
            verdict, msg = execute(cmd, cfg)
            summary.outcomes.append(BatchOutcome(lineno, text, verdict, msg))
            i += 1
    finally:
        if pool is not None:
            pool.shutdown()
    return summary
