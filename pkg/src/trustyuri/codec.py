"""Trusty URI grammar.

A trusty URI ends with an *artifact code*: the run of Base64 characters after
the last non-Base64 character. The first two characters name the module
(``FA``, ``RA`` or ``RB``), the remaining 43 carry a SHA-256 digest with two
zero bits appended, written in the URL-safe Base64 alphabet::

    http://example.org/r1.RA5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70
                          ^^ module
                            ^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^ hash part
"""

from __future__ import annotations

import base64
import re
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidInputError, NotTransferableError, NotTrustyReferenceError

BASE64_ALPHABET = (
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_"
)
_BASE64_SET = frozenset(BASE64_ALPHABET)

MIN_CODE_LENGTH = 25
HASH_PART_LENGTH = 43

# module identifier -> data part length
MODULES = {"FA": HASH_PART_LENGTH, "RA": HASH_PART_LENGTH, "RB": HASH_PART_LENGTH}

# (source, target) pairs where the identifier may be swapped without rehashing
TRANSFERABLE = frozenset({("RB", "RA")})

_EXTENSION_RE = re.compile(r"\.[A-Za-z0-9]{1,10}\Z")
MAX_STRIPPED_EXTENSIONS = 3


def is_base64_char(ch: str) -> bool:
    return ch in _BASE64_SET


def encode_hash_tail(digest: bytes) -> str:
    """Encode a 32-byte SHA-256 digest as the 43-character hash part.

    Appending two zero bits gives 258 bits, i.e. exactly 43 six-bit groups;
    that is the same bit content as unpadded URL-safe Base64.
    """
    if not isinstance(digest, (bytes, bytearray)) or len(digest) != 32:
        raise InvalidInputError("expected a 32-byte SHA-256 digest")
    return base64.urlsafe_b64encode(bytes(digest)).decode("ascii").rstrip("=")


def decode_hash_tail(tail: str) -> bytes:
    """Inverse of :func:`encode_hash_tail`; rejects nonzero padding bits."""
    if len(tail) != HASH_PART_LENGTH or not all(c in _BASE64_SET for c in tail):
        raise InvalidInputError(f"not a {HASH_PART_LENGTH}-character hash part: {tail!r}")
    if BASE64_ALPHABET.index(tail[-1]) & 0b11:
        raise InvalidInputError("trailing padding bits are not zero")
    return base64.urlsafe_b64decode(tail + "=")


@dataclass(frozen=True)
class ArtifactCode:
    module: str
    data_part: str

    def __post_init__(self):
        if self.module not in MODULES:
            raise InvalidInputError(f"unknown module identifier {self.module!r}")
        if not _well_formed_data(self.module, self.data_part):
            raise InvalidInputError(f"malformed data part for module {self.module}")

    @classmethod
    def parse(cls, text: str) -> ArtifactCode:
        return cls(text[:2], text[2:])

    @property
    def hash_part(self) -> str:
        # FA/RA/RB carry nothing but the hash in their data part
        return self.data_part

    def __str__(self) -> str:
        return self.module + self.data_part


def _well_formed_data(module: str, data: str) -> bool:
    if len(data) != MODULES[module] or not all(c in _BASE64_SET for c in data):
        return False
    return not BASE64_ALPHABET.index(data[-1]) & 0b11


class Classification(str, Enum):
    NOT_POTENTIAL = "not-potential"
    POTENTIAL = "potential"
    VERIFIED = "verified"


@dataclass(frozen=True)
class TrustyUriCandidate:
    uri: str
    classification: Classification
    code: ArtifactCode | None = None
    # why a URI is not potential: "no-tail", "unknown-module", "bad-length", "bad-padding"
    reason: str | None = None

    @property
    def is_potential(self) -> bool:
        return self.classification is not Classification.NOT_POTENTIAL

    @property
    def prefix(self) -> str:
        """Everything in front of the artifact code."""
        if self.code is None:
            return self.uri
        return self.uri[: -len(str(self.code))]

    def verified(self) -> TrustyUriCandidate:
        return TrustyUriCandidate(self.uri, Classification.VERIFIED, self.code)


def trailing_base64_run(uri: str) -> str:
    i = len(uri)
    while i > 0 and uri[i - 1] in _BASE64_SET:
        i -= 1
    return uri[i:]


def extract_artifact_code(uri: str) -> TrustyUriCandidate:
    tail = trailing_base64_run(uri)

    def reject(reason):
        return TrustyUriCandidate(uri, Classification.NOT_POTENTIAL, None, reason)

    if len(tail) < MIN_CODE_LENGTH:
        return reject("no-tail")
    module, data = tail[:2], tail[2:]
    if module not in MODULES:
        return reject("unknown-module")
    if len(data) != MODULES[module]:
        return reject("bad-length")
    if BASE64_ALPHABET.index(data[-1]) & 0b11:
        return reject("bad-padding")
    return TrustyUriCandidate(uri, Classification.POTENTIAL, ArtifactCode(module, data))


def is_potential_trusty_uri(uri: str) -> bool:
    return extract_artifact_code(uri).is_potential


def strip_extension(name: str) -> str:
    """Drop file extensions (``.nq``, ``.trig.gz``...) that follow an artifact code."""
    current = name
    for _ in range(MAX_STRIPPED_EXTENSIONS + 1):
        if extract_artifact_code(current).is_potential:
            return current
        m = _EXTENSION_RE.search(current)
        if m is None:
            break
        current = current[: m.start()]
    raise NotTrustyReferenceError(f"no artifact code found in {name!r}")


def append_artifact_code(base_uri: str, code: ArtifactCode | str) -> str:
    code = str(code)
    if base_uri and base_uri[-1] in _BASE64_SET:
        return f"{base_uri}.{code}"
    return base_uri + code


def to_ni_uri(trusty_uri: str, authority: str | None = None, include_module: bool = True) -> str:
    """Render a trusty URI as an RFC 6920 ``ni`` URI carrying the same digest."""
    cand = extract_artifact_code(trusty_uri)
    if not cand.is_potential:
        raise InvalidInputError(f"not a potential trusty URI ({cand.reason}): {trusty_uri!r}")
    ni = f"ni://{authority or ''}/sha-256;{cand.code.hash_part}"
    if include_module:
        ni += f"?module={cand.code.module}"
    return ni


def transfer_module(code: ArtifactCode, target: str) -> ArtifactCode:
    if (code.module, target) not in TRANSFERABLE:
        raise NotTransferableError(f"module {code.module} is not transferable to {target}")
    return ArtifactCode(target, code.data_part)
