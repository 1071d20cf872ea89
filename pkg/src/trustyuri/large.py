"""Out-of-memory transformation and checking.

Preprocessed statements are sorted with an external merge sort: runs of at
most ``max_in_memory_records`` statements are sorted in memory and spilled to
temporary files, then merged ``fan_in`` runs at a time. Run files hold the
serialized statement text (four LF-terminated lines per record) and are parsed
back into :class:`PreprocessedQuad` tuples while merging, so the merge order
is the canonical structural order rather than raw text order.

Temporary files go to ``SortConfig.temp_dir``, else ``$TRUSTYURI_TMPDIR``,
else the system default, always inside a fresh per-job subdirectory.
"""

from __future__ import annotations

import heapq
import os
import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator

from . import rdf
from .codec import ArtifactCode, extract_artifact_code, strip_extension
from .errors import NotTrustyReferenceError
from .rdfhash import (
    CheckPlan,
    PreprocessedQuad,
    StatementHasher,
    TransformPlan,
    parse_statement,
    restore_quad,
    run_check,
    serialize_statement,
)
from .rdf.nquads import quad_to_nquads
from .report import CheckReport

TMPDIR_ENV = "TRUSTYURI_TMPDIR"

DEFAULT_MAX_IN_MEMORY_RECORDS = 1_000_000
DEFAULT_FAN_IN = 16


@dataclass
class SortConfig:
    max_in_memory_records: int = DEFAULT_MAX_IN_MEMORY_RECORDS
    temp_dir: str | None = None
    fan_in: int = DEFAULT_FAN_IN

    def __post_init__(self):
        if self.max_in_memory_records < 1:
            raise ValueError("max_in_memory_records must be positive")
        if self.fan_in < 2:
            raise ValueError("fan_in must be at least 2")

    def resolved_temp_dir(self) -> str | None:
        return self.temp_dir or os.environ.get(TMPDIR_ENV) or None


@dataclass
class SortStats:
    """Instrumentation: how many records were held in memory at once."""

    runs_written: int = 0
    merge_passes: int = 0
    peak_resident_records: int = 0
    records_in: int = 0

    def resident(self, n: int) -> None:
        if n > self.peak_resident_records:
            self.peak_resident_records = n


@dataclass
class SortRun:
    path: Path
    record_count: int


def _write_records(path: Path, quads: Iterable[PreprocessedQuad]) -> int:
    n = 0
    with open(path, "wb") as f:
        for q in quads:
            f.write(serialize_statement(q).encode("utf-8"))
            n += 1
    return n


def read_records(path) -> Iterator[PreprocessedQuad]:
    with open(path, "rb") as f:
        for lines in zip(f, f, f, f):
            yield parse_statement(b"".join(lines).decode("utf-8"))


def _dedupe(quads: Iterable[PreprocessedQuad]) -> Iterator[PreprocessedQuad]:
    prev = None
    for q in quads:
        if q != prev:
            yield q
            prev = q


class ExternalSorter:
    """Sorts and deduplicates preprocessed statements using temporary files.

    Use as a context manager; the job directory is removed on exit, including
    when an exception escapes.
    """

    def __init__(self, cfg: SortConfig | None = None, stats: SortStats | None = None):
        self.cfg = cfg or SortConfig()
        self.stats = stats or SortStats()
        self._buffer: list[PreprocessedQuad] = []
        self._runs: list[SortRun] = []
        self._dir: Path | None = None
        self._counter = 0

    def __enter__(self):
        self._dir = Path(tempfile.mkdtemp(prefix="trustyuri-", dir=self.cfg.resolved_temp_dir()))
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    def close(self) -> None:
        if self._dir is not None:
            shutil.rmtree(self._dir, ignore_errors=True)
            self._dir = None

    @property
    def workdir(self) -> Path:
        if self._dir is None:
            raise RuntimeError("ExternalSorter used outside its context")
        return self._dir

    def temp_path(self, tag: str) -> Path:
        self._counter += 1
        return self.workdir / f"{tag}-{self._counter:06d}"

    def add(self, q: PreprocessedQuad) -> None:
        self._buffer.append(q)
        self.stats.records_in += 1
        self.stats.resident(len(self._buffer))
        if len(self._buffer) >= self.cfg.max_in_memory_records:
            self._spill()

    def extend(self, quads: Iterable[PreprocessedQuad]) -> None:
        for q in quads:
            self.add(q)

    def _spill(self) -> None:
        if not self._buffer:
            return
        self._buffer.sort()
        path = self.temp_path("run")
        n = _write_records(path, _dedupe(self._buffer))
        self._runs.append(SortRun(path, n))
        self.stats.runs_written += 1
        self._buffer = []

    def _merge_group(self, runs: list[SortRun]) -> Iterator[PreprocessedQuad]:
        self.stats.resident(len(runs))
        return _dedupe(heapq.merge(*(read_records(r.path) for r in runs)))

    def sorted(self) -> Iterator[PreprocessedQuad]:
        """Yield every added statement once, in canonical order."""
        if not self._runs:
            # everything fit in memory
            self._buffer.sort()
            buffered, self._buffer = self._buffer, []
            yield from _dedupe(buffered)
            return
        self._spill()
        runs = self._runs
        fan_in = self.cfg.fan_in
        while len(runs) > fan_in:
            self.stats.merge_passes += 1
            merged = []
            for i in range(0, len(runs), fan_in):
                group = runs[i : i + fan_in]
                path = self.temp_path("merge")
                n = _write_records(path, self._merge_group(group))
                for r in group:
                    r.path.unlink()
                merged.append(SortRun(path, n))
            runs = merged
        self.stats.merge_passes += 1
        self._runs = runs
        yield from self._merge_group(runs)


def _open_quads(path, fmt: str | None) -> tuple[BinaryIO, Iterator]:
    fmt = fmt or rdf.guess_format(path, default="nquads")
    f = open(path, "rb")
    return f, rdf.iter_quads(f, fmt)


def trusty_output_name(input_path, code: ArtifactCode) -> str:
    stem = Path(input_path).name
    for ext in rdf.FORMATS:
        if stem.lower().endswith(ext):
            stem = stem[: -len(ext)]
            break
    return f"{stem}.{code}.nq"


def transform_large_rdf(
    input_path,
    base_uri: str,
    module: str = "RA",
    cfg: SortConfig | None = None,
    output_dir=None,
    fmt: str | None = None,
    stats: SortStats | None = None,
) -> Path:
    """Two passes: hash the externally sorted statements, then write them out
    again with the placeholder replaced by the final code."""
    plan = TransformPlan(base_uri, module)
    out_dir = Path(output_dir) if output_dir is not None else Path(input_path).parent
    with ExternalSorter(cfg, stats) as sorter:
        f, quads = _open_quads(input_path, fmt)
        with f:
            sorter.extend(plan.rewrite_all(quads))
        hasher = StatementHasher()
        sorted_path = sorter.temp_path("sorted")
        with open(sorted_path, "wb") as out:
            for q in sorter.sorted():
                hasher.update(q)
                out.write(serialize_statement(q).encode("utf-8"))
        code = plan.code_for(hasher.hash_part())
        target = out_dir / trusty_output_name(input_path, code)
        partial = sorter.temp_path("output")
        code_str = str(code)
        with open(partial, "wb") as out:
            for q in read_records(sorted_path):
                out.write(quad_to_nquads(restore_quad(q, code_str)).encode("utf-8"))
        shutil.move(partial, target)
    return target


def check_large_rdf(
    input_path,
    candidate=None,
    cfg: SortConfig | None = None,
    fmt: str | None = None,
    stats: SortStats | None = None,
) -> CheckReport:
    """Like check_rdf but sorting through temporary files.

    ``candidate`` defaults to the artifact code in the file name.
    """
    candidate = _default_candidate(input_path, candidate)

    def compute(plan: CheckPlan) -> str:
        with ExternalSorter(cfg, stats) as sorter:
            f, quads = _open_quads(input_path, fmt)
            with f:
                for q in quads:
                    sorter.add(plan.preprocess(q))
            hasher = StatementHasher()
            for q in sorter.sorted():
                hasher.update(q)
            return hasher.hash_part()

    return run_check(candidate, compute, str(input_path))


def check_sorted_rdf(input_path, candidate=None, fmt: str | None = None) -> CheckReport:
    """Single streaming pass over a file already in canonical order.

    Out-of-order content is an ``error`` verdict, not ``invalid``.
    """
    candidate = _default_candidate(input_path, candidate)

    def compute(plan: CheckPlan) -> str:
        hasher = StatementHasher(strict_order=True)
        f, quads = _open_quads(input_path, fmt)
        with f:
            for q in quads:
                hasher.update(plan.preprocess(q))
        return hasher.hash_part()

    return run_check(candidate, compute, str(input_path))


def _default_candidate(input_path, candidate):
    if candidate is not None:
        return candidate
    name = Path(input_path).name
    try:
        stripped = strip_extension(name)
    except NotTrustyReferenceError:
        # classified as not-potential, which becomes an error verdict
        return name
    # only the code counts: the rest of a file name is not the trusty URI
    return extract_artifact_code(stripped).code
