"""File-level operations behind the command line and batch runner."""

from __future__ import annotations

import logging
from pathlib import Path

from . import rdf
from .codec import extract_artifact_code, strip_extension
from .errors import NotTrustyReferenceError
from .fa import check_file_fa
from .large import trusty_output_name
from .rdfhash import hash_preprocessed, run_check, transform_rdf
from .report import CheckReport

log = logging.getLogger(__name__)


def check_file(path, fmt: str | None = None) -> CheckReport:
    """Verify a trusty file against the artifact code in its own name.

    FA codes hash the bytes; RA/RB codes parse the file (format from the
    extension unless ``fmt`` is given) and hash the dataset.
    """
    path = Path(path)
    subject = str(path)
    try:
        cand = extract_artifact_code(strip_extension(path.name))
    except NotTrustyReferenceError as e:
        return CheckReport.error(str(e), subject=subject)
    if cand.code.module == "FA":
        return check_file_fa(path, cand.code)
    try:
        fmt = fmt or rdf.guess_format(path)
    except ValueError as e:
        return CheckReport.error(str(e), cand.code, subject)

    def compute(plan):
        with open(path, "rb") as f:
            return hash_preprocessed({plan.preprocess(q) for q in rdf.iter_quads(f, fmt)})

    # a bare code: the file name around it is not the trusty URI
    return run_check(cand.code, compute, subject)


def transform_rdf_file(path, base_uri: str, module: str = "RA", output_dir=None, fmt: str | None = None) -> Path:
    """In-memory transformation; writes ``<stem>.<code>.nq`` next to the input."""
    path = Path(path)
    fmt = fmt or rdf.guess_format(path, default="nquads")
    with open(path, "rb") as f:
        doc = rdf.parse(f, fmt)
    result = transform_rdf(doc, base_uri, module)
    out_dir = Path(output_dir) if output_dir is not None else path.parent
    target = out_dir / trusty_output_name(path, result.code)
    target.write_bytes(rdf.serialize_nquads(result.document))
    log.info("%s -> %s", path, result.uri)
    return target
