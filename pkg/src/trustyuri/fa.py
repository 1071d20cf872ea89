"""Module FA: trusty URIs over the raw bytes of a file."""

from __future__ import annotations

import hashlib
import os
from pathlib import Path
from typing import BinaryIO

from .codec import ArtifactCode, encode_hash_tail, strip_extension
from .errors import AlreadyTrustyError, InvalidInputError, NotTrustyReferenceError
from .report import CheckReport

CHUNK_SIZE = 1 << 20


def hash_bytes(stream: BinaryIO) -> ArtifactCode:
    h = hashlib.sha256()
    for chunk in iter(lambda: stream.read(CHUNK_SIZE), b""):
        h.update(chunk)
    return ArtifactCode("FA", encode_hash_tail(h.digest()))


def hash_file(path) -> ArtifactCode:
    with open(path, "rb") as f:
        return hash_bytes(f)


def check_file_fa(path, expected: ArtifactCode) -> CheckReport:
    if expected.module != "FA":
        raise InvalidInputError(f"expected an FA code, got {expected.module}")
    try:
        computed = hash_file(path)
    except OSError as e:
        return CheckReport.error(f"cannot read file: {e}", expected, str(path))
    return CheckReport.compare(expected, computed, str(path))


def trusty_file_name(name: str, code: ArtifactCode) -> str:
    """``e.txt`` -> ``e.FA....txt``; the code goes in front of the last extension."""
    p = Path(name)
    stem, suffix = (p.stem, p.suffix) if p.suffix else (p.name, "")
    return f"{stem}.{code}{suffix}"


def process_file(path) -> Path:
    """Rename a file so that its name carries its FA artifact code."""
    path = Path(path)
    try:
        strip_extension(path.name)
    except NotTrustyReferenceError:
        pass
    else:
        raise AlreadyTrustyError(f"{path.name} already carries an artifact code")
    code = hash_file(path)
    target = path.with_name(trusty_file_name(path.name, code))
    try:
        os.link(path, target)
    except FileExistsError:
        raise
    except OSError:
        # no hard links on this filesystem
        if target.exists():
            raise FileExistsError(f"{target} already exists") from None
        os.rename(path, target)
        return target
    os.unlink(path)
    return target
