"""Streaming N-Quads reader and canonical writer."""

from __future__ import annotations

import io
import re
from typing import BinaryIO, Iterable, Iterator

from ..errors import RdfSyntaxError
from .model import XSD_STRING, IRI, BlankNode, Literal, Quad, QuadDocument

_IRI = r'<((?:[^\x00-\x20<>"{}|^`\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*)>'
_BNODE = r"_:((?:[A-Za-z0-9_]|[^\x00-\x7f])(?:(?:[A-Za-z0-9_.\-]|[^\x00-\x7f])*(?:[A-Za-z0-9_\-]|[^\x00-\x7f]))?)"
_STRING = r'"((?:[^"\\\n\r]|\\[tbnrf"\'\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*)"'
_LANG = r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)"

_LINE_RE = re.compile(
    rf"""[ \t]*
    (?:{_IRI}|{_BNODE})[ \t]*                                  # subject
    {_IRI}[ \t]*                                               # predicate
    (?:{_IRI}|{_BNODE}|{_STRING}(?:\^\^{_IRI}|{_LANG})?)[ \t]*  # object
    (?:{_IRI}[ \t]*)?                                          # graph
    \.[ \t]*(?:\#.*)?\Z""",
    re.VERBOSE,
)
_BLANK_GRAPH_RE = re.compile(rf"(.*[ \t>\"])[ \t]*{_BNODE}[ \t]*\.[ \t]*(?:#.*)?\Z")
_EMPTY_RE = re.compile(r"[ \t]*(?:#.*)?\Z")

_SCHEME_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")
_FORBIDDEN_IRI_RE = re.compile(r'[\x00-\x20<>"{}|^`\\]')
_UCHAR_RE = re.compile(r"\\u([0-9A-Fa-f]{4})|\\U([0-9A-Fa-f]{8})")
_ECHAR_RE = re.compile(r"""\\(?:([tbnrf"'\\])|u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8}))""")
_ECHARS = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _codepoint(hex_digits: str) -> str:
    cp = int(hex_digits, 16)
    if cp > 0x10FFFF or 0xD800 <= cp <= 0xDFFF:
        raise ValueError(f"invalid code point U+{cp:X}")
    return chr(cp)


def unescape_iri(raw: str) -> str:
    if "\\" in raw:
        raw = _UCHAR_RE.sub(lambda m: _codepoint(m.group(1) or m.group(2)), raw)
    return raw


def unescape_string(raw: str) -> str:
    if "\\" not in raw:
        return raw

    def repl(m):
        if m.group(1):
            return _ECHARS[m.group(1)]
        return _codepoint(m.group(2) or m.group(3))

    return _ECHAR_RE.sub(repl, raw)


def check_iri(value: str) -> str:
    """Accept only absolute IRIs without whitespace or delimiter characters."""
    if _FORBIDDEN_IRI_RE.search(value):
        raise ValueError(f"illegal character in IRI {value!r}")
    if not _SCHEME_RE.match(value):
        raise ValueError(f"IRI is not absolute: {value!r}")
    return value


def _iri(raw: str) -> IRI:
    if "\\" in raw:
        return IRI(check_iri(unescape_iri(raw)))
    # the line grammar already excludes forbidden characters
    if not _SCHEME_RE.match(raw):
        raise ValueError(f"IRI is not absolute: {raw!r}")
    return IRI(raw)


def parse_line(line: str) -> Quad | None:
    """Parse one N-Quads line; ``None`` for blank and comment-only lines."""
    m = _LINE_RE.match(line)
    if m is None:
        if _EMPTY_RE.match(line):
            return None
        bg = _BLANK_GRAPH_RE.match(line)
        if bg is not None and _LINE_RE.match(bg.group(1) + " ."):
            raise ValueError("blank node used as graph label")
        raise ValueError("malformed statement")
    s_iri, s_bn, p, o_iri, o_bn, o_str, o_dt, o_lang, g = m.groups()
    subj = _iri(s_iri) if s_iri is not None else BlankNode(s_bn)
    if o_iri is not None:
        obj = _iri(o_iri)
    elif o_bn is not None:
        obj = BlankNode(o_bn)
    else:
        obj = Literal(
            unescape_string(o_str),
            check_iri(unescape_iri(o_dt)) if o_dt is not None else None,
            o_lang,
        )
    return Quad(subj, _iri(p), obj, _iri(g) if g is not None else None)


def iter_nquads(stream: BinaryIO) -> Iterator[Quad]:
    """Yield quads from a binary stream one line at a time."""
    for lineno, raw in enumerate(stream, 1):
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise RdfSyntaxError(f"invalid UTF-8: {e.reason}", lineno) from None
        if line.endswith("\n"):
            line = line[:-2] if line.endswith("\r\n") else line[:-1]
        try:
            quad = parse_line(line)
        except ValueError as e:
            raise RdfSyntaxError(str(e), lineno) from None
        if quad is not None:
            yield quad


def parse_nquads(stream: BinaryIO) -> QuadDocument:
    return QuadDocument(list(iter_nquads(stream)), "nquads")


def parse_nquads_string(text: str) -> QuadDocument:
    return parse_nquads(io.BytesIO(text.encode("utf-8")))


_STRING_ESCAPES = {
    ord("\\"): "\\\\",
    ord('"'): '\\"',
    ord("\n"): "\\n",
    ord("\r"): "\\r",
    ord("\t"): "\\t",
    ord("\b"): "\\b",
    ord("\f"): "\\f",
    0x7F: "\\u007F",
}
_STRING_ESCAPES.update({c: f"\\u{c:04X}" for c in range(0x20) if c not in _STRING_ESCAPES})
_NEEDS_ESCAPE_RE = re.compile(r'[\x00-\x1f"\\\x7f]')


def escape_string(value: str) -> str:
    if _NEEDS_ESCAPE_RE.search(value):
        return value.translate(_STRING_ESCAPES)
    return value


def term_to_nquads(term) -> str:
    if isinstance(term, IRI):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    body = f'"{escape_string(term.lexical)}"'
    if term.language is not None:
        return f"{body}@{term.language}"
    if term.datatype == XSD_STRING:
        return body
    return f"{body}^^<{term.datatype}>"


def quad_to_nquads(quad: Quad) -> str:
    parts = [term_to_nquads(quad.subject), term_to_nquads(quad.predicate), term_to_nquads(quad.object)]
    if quad.graph is not None:
        parts.append(term_to_nquads(quad.graph))
    return " ".join(parts) + " .\n"


def serialize_nquads(quads: Iterable[Quad] | QuadDocument) -> bytes:
    return "".join(quad_to_nquads(q) for q in quads).encode("utf-8")


def write_nquads(quads: Iterable[Quad], stream: BinaryIO) -> None:
    for q in quads:
        stream.write(quad_to_nquads(q).encode("utf-8"))
