import io

import pytest
from hypothesis import given, strategies as st

from trustyuri.codec import ArtifactCode, encode_hash_tail
from trustyuri.errors import AlreadyTrustyError, InvalidInputError
from trustyuri.fa import check_file_fa, hash_bytes, hash_file, process_file, trusty_file_name
from trustyuri.report import Verdict

EMPTY_CODE = "FA47DEQpj8HBSa-_TImW-5JCeuQeRkm5NMpJWZG3hSuFU"
# sha256 of the single byte 0x00, from coreutils sha256sum
NUL_CODE = "FAbjQLnP-zepicpUTmu3gKLHiQHT-zNzh2hRGjBhevoB0"


def test_empty_stream():
    assert str(hash_bytes(io.BytesIO(b""))) == EMPTY_CODE


def test_nul_byte():
    assert str(hash_bytes(io.BytesIO(b"\x00"))) == NUL_CODE


def test_one_byte_difference():
    assert hash_bytes(io.BytesIO(b"abc")) != hash_bytes(io.BytesIO(b"abd"))


def test_chunked_read_matches_whole(tmp_path):
    data = bytes(range(256)) * 9000  # spans several read chunks
    p = tmp_path / "big.bin"
    p.write_bytes(data)
    import hashlib

    assert hash_file(p).hash_part == encode_hash_tail(hashlib.sha256(data).digest())


@given(st.binary(max_size=200))
def test_name_independent(data):
    assert hash_bytes(io.BytesIO(data)) == hash_bytes(io.BytesIO(bytes(data)))


def test_check_file_fa(tmp_path):
    p = tmp_path / "e.txt"
    p.write_bytes(b"")
    assert check_file_fa(p, ArtifactCode.parse(EMPTY_CODE)).verdict is Verdict.VALID
    assert check_file_fa(p, ArtifactCode.parse(NUL_CODE)).verdict is Verdict.INVALID
    p.write_bytes(b"\x01")
    assert check_file_fa(p, ArtifactCode.parse(NUL_CODE)).verdict is Verdict.INVALID
    assert check_file_fa(tmp_path / "missing", ArtifactCode.parse(EMPTY_CODE)).verdict is Verdict.ERROR
    with pytest.raises(InvalidInputError):
        check_file_fa(p, ArtifactCode("RA", EMPTY_CODE[2:]))


@pytest.mark.parametrize(
    "name, expected",
    [
        ("e.txt", "e." + EMPTY_CODE + ".txt"),
        ("data", "data." + EMPTY_CODE),
        ("a.tar.gz", "a.tar." + EMPTY_CODE + ".gz"),
    ],
)
def test_trusty_file_name(name, expected):
    assert trusty_file_name(name, ArtifactCode.parse(EMPTY_CODE)) == expected


def test_process_file_round_trip(tmp_path):
    p = tmp_path / "e.txt"
    p.write_bytes(b"")
    target = process_file(p)
    assert target.name == "e." + EMPTY_CODE + ".txt"
    assert not p.exists() and target.exists()
    assert check_file_fa(target, ArtifactCode.parse(EMPTY_CODE)).ok
    with pytest.raises(AlreadyTrustyError):
        process_file(target)


def test_process_extensionless(tmp_path):
    p = tmp_path / "data"
    p.write_bytes(b"\x00")
    assert process_file(p).name == "data." + NUL_CODE
    with pytest.raises(AlreadyTrustyError):
        process_file(tmp_path / ("data." + NUL_CODE))


def test_process_file_does_not_clobber(tmp_path):
    (tmp_path / ("e." + EMPTY_CODE + ".txt")).write_bytes(b"keep")
    p = tmp_path / "e.txt"
    p.write_bytes(b"")
    with pytest.raises(FileExistsError):
        process_file(p)
    assert p.exists()
    assert (tmp_path / ("e." + EMPTY_CODE + ".txt")).read_bytes() == b"keep"
