import hashlib

import pytest
from hypothesis import given, strategies as st

from trustyuri.codec import (
    BASE64_ALPHABET,
    ArtifactCode,
    Classification,
    append_artifact_code,
    decode_hash_tail,
    encode_hash_tail,
    extract_artifact_code,
    strip_extension,
    to_ni_uri,
    transfer_module,
)
from trustyuri.errors import InvalidInputError, NotTransferableError, NotTrustyReferenceError

EMPTY_TAIL = "47DEQpj8HBSa-_TImW-5JCeuQeRkm5NMpJWZG3hSuFU"
R1 = "http://example.org/r1.RA5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70"
R1_CODE = "RA5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70"
R1_TAIL = R1_CODE[2:]


def bitwise_encode(digest: bytes) -> str:
    """Independent encoder: digest bits + two zero bits, six bits per character."""
    bits = "".join(f"{b:08b}" for b in digest) + "00"
    return "".join(BASE64_ALPHABET[int(bits[i:i + 6], 2)] for i in range(0, len(bits), 6))


def test_alphabet_order():
    assert BASE64_ALPHABET[0] == "A" and BASE64_ALPHABET[25] == "Z"
    assert BASE64_ALPHABET[26] == "a" and BASE64_ALPHABET[51] == "z"
    assert BASE64_ALPHABET[52:62] == "0123456789"
    assert BASE64_ALPHABET[62:] == "-_"


def test_empty_digest_tail():
    assert encode_hash_tail(hashlib.sha256(b"").digest()) == EMPTY_TAIL


def test_zero_digest_is_all_a():
    tail = encode_hash_tail(bytes(32))
    assert len(tail) == 43 and tail.startswith("AAAAA")


@pytest.mark.parametrize(
    "sha256_hex, expected",
    [
        # values from coreutils sha256sum, tails from the bitwise encoder above
        ("ca978112ca1bbdcafac231b39a23dc4da786eff8147c4e72b9807785afee48bb",
         "ypeBEsobvcr6wjGzmiPcTaeG7_gUfE5yuYB3ha_uSLs"),
        ("6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d",
         "bjQLnP-zepicpUTmu3gKLHiQHT-zNzh2hRGjBhevoB0"),
    ],
)
def test_known_digests(sha256_hex, expected):
    digest = bytes.fromhex(sha256_hex)
    assert bitwise_encode(digest) == expected
    assert encode_hash_tail(digest) == expected


def test_single_byte_a():
    assert encode_hash_tail(hashlib.sha256(b"a").digest()) == "ypeBEsobvcr6wjGzmiPcTaeG7_gUfE5yuYB3ha_uSLs"


@pytest.mark.parametrize("bad", [b"", bytes(31), bytes(33), "x" * 32])
def test_encode_rejects_wrong_length(bad):
    with pytest.raises(InvalidInputError):
        encode_hash_tail(bad)


@given(st.binary(min_size=32, max_size=32))
def test_encode_matches_bitwise_and_round_trips(digest):
    tail = encode_hash_tail(digest)
    assert tail == bitwise_encode(digest)
    assert len(tail) == 43
    assert BASE64_ALPHABET.index(tail[-1]) & 0b11 == 0
    assert decode_hash_tail(tail) == digest


def test_decode_rejects_nonzero_padding():
    with pytest.raises(InvalidInputError):
        decode_hash_tail(EMPTY_TAIL[:-1] + "V")


def test_extract_example_uri():
    cand = extract_artifact_code(R1)
    assert cand.classification is Classification.POTENTIAL
    assert str(cand.code) == R1_CODE
    assert cand.code.module == "RA"
    assert cand.code.hash_part == R1_TAIL
    assert cand.prefix == "http://example.org/r1."


@pytest.mark.parametrize(
    "uri, reason",
    [
        ("http://example.org/r1", "no-tail"),
        ("http://example.org/x.ZZ" + R1_TAIL, "unknown-module"),
        ("http://example.org/x.RA" + R1_TAIL + "A", "bad-length"),
        ("http://example.org/x.RA" + R1_TAIL[:-1] + "B", "bad-padding"),
        ("http://example.org/r1." + "a" * 24, "no-tail"),
    ],
)
def test_extract_not_potential(uri, reason):
    cand = extract_artifact_code(uri)
    assert cand.classification is Classification.NOT_POTENTIAL
    assert cand.code is None
    assert cand.reason == reason


def test_extract_longest_run_includes_base64_prefix():
    # "r1" directly in front of the code is part of the run, so it is not a code
    assert not extract_artifact_code("http://example.org/r1" + R1_CODE).is_potential


def test_whole_string_code():
    cand = extract_artifact_code(R1_CODE)
    assert cand.is_potential and cand.prefix == ""


@pytest.mark.parametrize(
    "name, expected",
    [
        ("r1." + R1_CODE + ".nq", "r1." + R1_CODE),
        ("r1." + R1_CODE, "r1." + R1_CODE),
        ("r1." + R1_CODE + ".trig.gz", "r1." + R1_CODE),
        ("e.FA" + EMPTY_TAIL + ".txt", "e.FA" + EMPTY_TAIL),
    ],
)
def test_strip_extension(name, expected):
    assert strip_extension(name) == expected
    assert strip_extension(expected) == expected


@pytest.mark.parametrize("name", ["r1.nq", "r1", "r1." + R1_CODE + ".a.b.c.d", "x." + R1_CODE + ".toolongextension"])
def test_strip_extension_errors(name):
    with pytest.raises(NotTrustyReferenceError):
        strip_extension(name)


def test_append_artifact_code():
    code = ArtifactCode.parse(R1_CODE)
    assert append_artifact_code("http://example.org/r1", code) == R1
    assert append_artifact_code("http://example.org/", code) == "http://example.org/" + R1_CODE
    assert append_artifact_code("http://example.org/a#", code) == "http://example.org/a#" + R1_CODE


@given(st.text(min_size=0, max_size=30), st.binary(min_size=32, max_size=32), st.sampled_from(["FA", "RA", "RB"]))
def test_append_then_extract(base, digest, module):
    code = ArtifactCode(module, encode_hash_tail(digest))
    uri = append_artifact_code(base, code)
    cand = extract_artifact_code(uri)
    assert cand.is_potential, uri
    assert cand.code == code
    assert cand.prefix + str(code) == uri


def test_ni_uri_examples():
    assert to_ni_uri(R1) == f"ni:///sha-256;{R1_TAIL}?module=RA"
    assert to_ni_uri(R1, "example.org", include_module=False) == f"ni://example.org/sha-256;{R1_TAIL}"
    assert to_ni_uri("e.FA" + EMPTY_TAIL) == f"ni:///sha-256;{EMPTY_TAIL}?module=FA"


def test_ni_uri_rejects_plain():
    with pytest.raises(InvalidInputError):
        to_ni_uri("http://example.org/r1")


def test_transfer_module():
    rb = ArtifactCode("RB", R1_TAIL)
    ra = transfer_module(rb, "RA")
    assert str(ra) == "RA" + R1_TAIL and ra.hash_part == rb.hash_part
    with pytest.raises(NotTransferableError):
        transfer_module(ArtifactCode("RA", R1_TAIL), "RB")
    with pytest.raises(NotTransferableError):
        transfer_module(ArtifactCode("FA", R1_TAIL), "RA")


def test_artifact_code_validation():
    with pytest.raises(InvalidInputError):
        ArtifactCode("ZZ", R1_TAIL)
    with pytest.raises(InvalidInputError):
        ArtifactCode("RA", R1_TAIL[:-1])
