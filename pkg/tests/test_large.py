import os
import random

import pytest

from gen import random_preprocessed, random_quads
from synth import BASE, write_synthetic_nquads
from trustyuri import large
from trustyuri.commands import check_file, transform_rdf_file
from trustyuri.errors import ModuleConstraintError
from trustyuri.large import (
    ExternalSorter,
    SortConfig,
    SortStats,
    check_large_rdf,
    check_sorted_rdf,
    transform_large_rdf,
)
from trustyuri.rdf import serialize_nquads
from trustyuri.report import Verdict


def _fixture(tmp_path, seed, name="doc.nq"):
    quads = random_quads(random.Random(seed), "http://example.org/doc", max_quads=30)
    p = tmp_path / name
    p.write_bytes(serialize_nquads(quads))
    return p


@pytest.mark.parametrize("max_records", [1, 2, 3, 7, 1000])
@pytest.mark.parametrize("fan_in", [2, 3, 16])
def test_external_sorter_matches_sorted_set(tmp_path, max_records, fan_in):
    rng = random.Random(max_records * 100 + fan_in)
    quads = [random_preprocessed(rng) for _ in range(60)]
    stats = SortStats()
    with ExternalSorter(SortConfig(max_records, str(tmp_path), fan_in), stats) as sorter:
        sorter.extend(quads)
        assert list(sorter.sorted()) == sorted(set(quads))
    assert stats.records_in == 60
    assert stats.peak_resident_records <= max(max_records, fan_in)
    assert os.listdir(tmp_path) == []


@pytest.mark.parametrize("seed", range(12))
def test_large_equals_in_memory(tmp_path, seed):
    src = _fixture(tmp_path, seed)
    small_dir, big_dir = tmp_path / "small", tmp_path / "big"
    small_dir.mkdir()
    big_dir.mkdir()
    small = transform_rdf_file(src, "http://example.org/doc", output_dir=small_dir)
    big = transform_large_rdf(src, "http://example.org/doc", cfg=SortConfig(3, fan_in=2), output_dir=big_dir)
    assert small.name == big.name
    assert small.read_bytes() == big.read_bytes()
    cfg = SortConfig(2, fan_in=2)
    assert check_large_rdf(big, cfg=cfg).verdict is Verdict.VALID
    assert check_sorted_rdf(big).verdict is Verdict.VALID
    assert check_file(big).verdict is Verdict.VALID


def test_trig_input(tmp_path):
    src = tmp_path / "doc.trig"
    src.write_text('@prefix ex: <http://e/> . <http://example.org/doc> { ex:s ex:p "x", _:b . }\n')
    out = transform_large_rdf(src, "http://example.org/doc", cfg=SortConfig(1, fan_in=2))
    assert out.name.startswith("doc.RA") and out.suffix == ".nq"
    assert check_file(out).ok


def test_rb_large(tmp_path):
    src = tmp_path / "np.nq"
    src.write_bytes(b'<http://x/s> <http://x/p> "1" <http://b/np> .\n<http://b/np> <http://x/p> _:a <http://b/np> .\n')
    out = transform_large_rdf(src, "http://b/np", "RB", SortConfig(1, fan_in=2))
    assert ".RB" in out.name
    assert check_large_rdf(out).ok and check_sorted_rdf(out).ok
    bad = tmp_path / "bad.nq"
    bad.write_bytes(b'<http://x/s> <http://x/p> "1" .\n')
    with pytest.raises(ModuleConstraintError):
        transform_large_rdf(bad, "http://b/np", "RB")


def test_swapped_lines_is_error_not_invalid(tmp_path):
    out = transform_rdf_file(_fixture(tmp_path, 5), "http://example.org/doc")
    lines = out.read_bytes().splitlines(keepends=True)
    assert len(lines) >= 3
    i = next(i for i in range(len(lines) - 1) if lines[i] != lines[i + 1])
    lines[i], lines[i + 1] = lines[i + 1], lines[i]
    out.write_bytes(b"".join(lines))
    report = check_sorted_rdf(out)
    assert report.verdict is Verdict.ERROR and "order" in report.message
    # the content itself is unchanged, so the order-insensitive checks still pass
    assert check_large_rdf(out).ok and check_file(out).ok


def test_mutated_large_file_matches_in_memory(tmp_path):
    out = transform_rdf_file(_fixture(tmp_path, 8), "http://example.org/doc")
    data = bytearray(out.read_bytes())
    i = data.index(b"<http://") + 8
    data[i] = ord("q") if data[i] != ord("q") else ord("r")
    out.write_bytes(bytes(data))
    assert check_large_rdf(out, cfg=SortConfig(2, fan_in=2)).verdict == check_file(out).verdict
    assert check_file(out).verdict is not Verdict.VALID


def test_temp_files_removed_on_error(tmp_path, monkeypatch):
    work = tmp_path / "work"
    work.mkdir()
    src = tmp_path / "broken.nq"
    src.write_bytes(b"<http://x/s> <http://x/p> <http://x/o> .\n" * 50 + b"not rdf\n")
    with pytest.raises(Exception):
        transform_large_rdf(src, "http://b/x", cfg=SortConfig(5, str(work), 2))
    assert list(work.iterdir()) == []
    assert check_large_rdf(tmp_path / "x.RA" / "missing.nq").verdict is Verdict.ERROR


def test_env_temp_dir(tmp_path, monkeypatch):
    work = tmp_path / "envtmp"
    work.mkdir()
    monkeypatch.setenv(large.TMPDIR_ENV, str(work))
    seen = []
    orig = large.ExternalSorter.__enter__

    def spy(self):
        r = orig(self)
        seen.append(self.workdir.parent)
        return r

    monkeypatch.setattr(large.ExternalSorter, "__enter__", spy)
    transform_large_rdf(_fixture(tmp_path, 2), "http://example.org/doc", cfg=SortConfig(2, fan_in=2))
    assert seen == [work]
    assert list(work.iterdir()) == []


def test_sort_config_validation():
    with pytest.raises(ValueError):
        SortConfig(0)
    with pytest.raises(ValueError):
        SortConfig(10, fan_in=1)


def test_memory_bound_on_synthetic(tmp_path):
    src = tmp_path / "synth.nq"
    write_synthetic_nquads(src, 5000, seed=3)
    stats = SortStats()
    out = transform_large_rdf(src, BASE, cfg=SortConfig(200, fan_in=4), stats=stats, output_dir=tmp_path)
    assert stats.peak_resident_records <= 200
    assert stats.runs_written == 25 and stats.merge_passes >= 2
    small_dir = tmp_path / "small"
    small_dir.mkdir()
    assert transform_rdf_file(src, BASE, output_dir=small_dir).read_bytes() == out.read_bytes()


def test_output_name():
    from trustyuri.codec import ArtifactCode

    code = ArtifactCode.parse("RA" + "A" * 43)
    assert large.trusty_output_name("dir/doc.trig", code) == f"doc.{code}.nq"
    assert large.trusty_output_name("doc.NQ", code) == f"doc.{code}.nq"
    assert large.trusty_output_name("doc", code) == f"doc.{code}.nq"
