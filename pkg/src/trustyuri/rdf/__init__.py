"""RDF dataset model and N-Quads / TriG readers."""

from pathlib import Path

from .model import XSD_STRING, IRI, BlankNode, Literal, Quad, QuadDocument, Term
from .nquads import iter_nquads, parse_nquads, parse_nquads_string, quad_to_nquads, serialize_nquads
from .trig import iter_trig, parse_trig, parse_trig_string

FORMATS = {".nq": "nquads", ".nquads": "nquads", ".trig": "trig"}


def guess_format(path, default=None):
    """Pick a parser from the file extension, ignoring a trailing artifact code."""
    suffix = Path(path).suffix.lower()
    fmt = FORMATS.get(suffix, default)
    if fmt is None:
        raise ValueError(f"cannot tell RDF format of {path}; pass a format explicitly")
    return fmt


def iter_quads(stream, fmt):
    if fmt == "nquads":
        return iter_nquads(stream)
    if fmt == "trig":
        return iter_trig(stream)
    raise ValueError(f"unsupported RDF format {fmt!r}")


def parse(stream, fmt) -> QuadDocument:
    return QuadDocument(list(iter_quads(stream, fmt)), fmt)


__all__ = [
    "XSD_STRING", "IRI", "BlankNode", "Literal", "Quad", "QuadDocument", "Term",
    "FORMATS", "guess_format", "iter_quads", "parse",
    "iter_nquads", "parse_nquads", "parse_nquads_string", "quad_to_nquads", "serialize_nquads",
    "iter_trig", "parse_trig", "parse_trig_string",
]
