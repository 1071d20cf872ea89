"""Streaming reader for a practical subset of TriG.

Supported: ``@prefix``/``PREFIX``, ``@base``/``BASE``, named and default graph
blocks (with optional ``GRAPH`` keyword), predicate-object lists with ``;`` and
``,``, the ``a`` keyword, all four string quoting styles, language tags,
datatypes, numeric and boolean shorthand, labelled blank nodes and ``[ ... ]``
property lists. Collections and quoted triples are rejected.
"""

from __future__ import annotations

import codecs
import io
import re
from typing import BinaryIO, Iterator
from urllib.parse import urljoin

from ..errors import RdfSyntaxError
from .model import RDF_TYPE, XSD, IRI, BlankNode, Literal, Quad, QuadDocument
from .nquads import check_iri, unescape_iri, unescape_string

_PN_CHARS_BASE = (
    r"A-Za-z\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF\u200C-\u200D"
    r"\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF\uFDF0-\uFFFD\U00010000-\U000EFFFF"
)
_PN_CHARS_U = _PN_CHARS_BASE + "_"
_PN_CHARS = _PN_CHARS_U + r"\-0-9\u00B7\u0300-\u036F\u203F-\u2040"
_PN_PREFIX = rf"[{_PN_CHARS_BASE}](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?"
_PLX = r"%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%]"
_PN_LOCAL = rf"(?:[{_PN_CHARS_U}:0-9]|{_PLX})(?:(?:[{_PN_CHARS}.:]|{_PLX})*(?:[{_PN_CHARS}:]|{_PLX}))?"

_TOKEN_RE = re.compile(
    rf"""
    (?P<iri><[^<>"{{}}|^`\\\x00-\x20]*(?:\\[uU][0-9A-Fa-f]+[^<>"{{}}|^`\\\x00-\x20]*)*>)
  | (?P<bnode>_:[{_PN_CHARS_U}0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)
  | (?P<pname>(?:{_PN_PREFIX})?:(?:{_PN_LOCAL})?)
  | (?P<long1>\"\"\"(?:[^"\\]|\\.|"(?!""))*\"\"\")
  | (?P<long2>'''(?:[^'\\]|\\.|'(?!''))*''')
  | (?P<str1>"(?:[^"\\\n\r]|\\.)*")
  | (?P<str2>'(?:[^'\\\n\r]|\\.)*')
  | (?P<double>[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+))
  | (?P<decimal>[+-]?[0-9]*\.[0-9]+)
  | (?P<integer>[+-]?[0-9]+)
  | (?P<at>@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*)
  | (?P<dtmark>\^\^)
  | (?P<word>[A-Za-z]+)
  | (?P<punct>[{{}}\[\]().;,])
    """,
    re.VERBOSE,
)
_SKIP_RE = re.compile(r"(?:[ \t\r\n]|#[^\r\n]*)*")

_CHUNK = 1 << 16


class _Lexer:
    def __init__(self, stream: BinaryIO):
        self._stream = stream
        self._decoder = codecs.getincrementaldecoder("utf-8")()
        self._buf = ""
        self._pos = 0
        self._eof = False
        self._dropped_lines = 0
        self._peeked = None

    def _fill(self) -> bool:
        if self._eof:
            return False
        raw = self._stream.read(_CHUNK)
        try:
            text = self._decoder.decode(raw, final=not raw)
        except UnicodeDecodeError as e:
            raise RdfSyntaxError(f"invalid UTF-8: {e.reason}", self.line) from None
        if not raw:
            self._eof = True
        if self._pos > _CHUNK:
            self._dropped_lines += self._buf.count("\n", 0, self._pos)
            self._buf = self._buf[self._pos :]
            self._pos = 0
        self._buf += text
        return True

    @property
    def line(self) -> int:
        return self._dropped_lines + self._buf.count("\n", 0, self._pos) + 1

    def _match(self, regex):
        while True:
            m = regex.match(self._buf, self._pos)
            if (m is None or m.end() == len(self._buf)) and not self._eof:
                self._fill()
                continue
            return m

    def peek(self):
        if self._peeked is None:
            self._pos = self._match(_SKIP_RE).end()
            if self._pos >= len(self._buf):
                self._peeked = ("eof", "")
            else:
                m = self._match(_TOKEN_RE)
                if m is None:
                    raise RdfSyntaxError(f"unexpected character {self._buf[self._pos]!r}", self.line)
                self._peeked = (m.lastgroup, m.group())
                self._peek_end = m.end()
        return self._peeked

    def next(self):
        tok = self.peek()
        if tok[0] != "eof":
            self._pos = self._peek_end
        self._peeked = None
        return tok


_NUMERIC_TYPES = {"integer": XSD + "integer", "decimal": XSD + "decimal", "double": XSD + "double"}
_PN_ESCAPE_RE = re.compile(r"\\(.)")


class _TrigParser:
    def __init__(self, stream: BinaryIO, base: str | None):
        self.lex = _Lexer(stream)
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.bnodes: dict[str, BlankNode] = {}
        self._anon = 0
        self.graph: IRI | None = None

    def error(self, message):
        return RdfSyntaxError(message, self.lex.line)

    def expect(self, kind, value=None):
        tok = self.lex.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise self.error(f"expected {value or kind}, found {tok[1] or 'end of input'!r}")
        return tok

    def is_punct(self, value):
        tok = self.lex.peek()
        return tok[0] == "punct" and tok[1] == value

    def is_word(self, word):
        tok = self.lex.peek()
        return tok[0] == "word" and tok[1].upper() == word

    # -- terms

    def resolve(self, raw: str) -> IRI:
        try:
            value = unescape_iri(raw[1:-1])
            if self.base is not None:
                value = urljoin(self.base, value)
            return IRI(check_iri(value))
        except ValueError as e:
            raise self.error(str(e)) from None

    def expand(self, pname: str) -> IRI:
        prefix, _, local = pname.partition(":")
        if prefix not in self.prefixes:
            raise self.error(f"undeclared prefix {prefix!r}")
        local = _PN_ESCAPE_RE.sub(r"\1", local)
        try:
            return IRI(check_iri(self.prefixes[prefix] + local))
        except ValueError as e:
            raise self.error(str(e)) from None

    def blank(self, label: str) -> BlankNode:
        # relabel so generated and explicit labels never collide
        node = self.bnodes.get(label)
        if node is None:
            node = self.bnodes[label] = self.fresh_blank()
        return node

    def fresh_blank(self) -> BlankNode:
        self._anon += 1
        return BlankNode(f"b{self._anon}")

    def iri_token(self, tok) -> IRI:
        if tok[0] == "iri":
            return self.resolve(tok[1])
        if tok[0] == "pname":
            return self.expand(tok[1])
        raise self.error(f"expected IRI, found {tok[1] or 'end of input'!r}")

    def literal(self, tok) -> Literal:
        kind, text = tok
        if kind in ("long1", "long2"):
            body = text[3:-3]
        else:
            body = text[1:-1]
        try:
            lexical = unescape_string(body)
        except ValueError as e:
            raise self.error(str(e)) from None
        if "\\" in body and _bad_escape(body):
            raise self.error("invalid escape sequence in string")
        nxt = self.lex.peek()
        if nxt[0] == "at":
            self.lex.next()
            return Literal(lexical, language=nxt[1][1:])
        if nxt[0] == "dtmark":
            self.lex.next()
            return Literal(lexical, datatype=self.iri_token(self.lex.next()).value)
        return Literal(lexical)

    # -- grammar

    def document(self) -> Iterator[Quad]:
        while True:
            kind, value = self.lex.peek()
            if kind == "eof":
                return
            if kind == "at":
                self.directive(value, sparql=False)
            elif kind == "word" and value.upper() in ("PREFIX", "BASE"):
                self.directive(value, sparql=True)
            else:
                yield from self.block()

    def directive(self, keyword, sparql):
        self.lex.next()
        keyword = keyword.lstrip("@").lower()
        if keyword == "prefix":
            name = self.expect("pname")[1]
            if not name.endswith(":") or name.count(":") != 1:
                raise self.error(f"bad prefix name {name!r}")
            self.prefixes[name[:-1]] = self.resolve(self.expect("iri")[1]).value
        elif keyword == "base":
            self.base = self.resolve(self.expect("iri")[1]).value
        else:
            raise self.error(f"unknown directive @{keyword}")
        if not sparql:
            self.expect("punct", ".")

    def block(self) -> Iterator[Quad]:
        if self.is_word("GRAPH"):
            self.lex.next()
            self.graph = self.graph_label(self.lex.next())
            yield from self.wrapped_graph()
            return
        if self.is_punct("{"):
            self.graph = None
            yield from self.wrapped_graph()
            return
        tok = self.lex.peek()
        if tok[0] == "punct" and tok[1] == "[":
            self.graph = None
            yield from self.triples()
            self.expect("punct", ".")
            return
        if tok[0] == "punct" and tok[1] == "(":
            raise self.error("collections are not supported")
        self.lex.next()
        if self.is_punct("{"):
            self.graph = self.graph_label(tok)
            yield from self.wrapped_graph()
            return
        self.graph = None
        yield from self.predicate_object_list(self.subject(tok))
        self.expect("punct", ".")

    def graph_label(self, tok) -> IRI:
        if tok[0] == "bnode" or (tok[0] == "punct" and tok[1] == "["):
            raise self.error("blank node used as graph label")
        return self.iri_token(tok)

    def wrapped_graph(self) -> Iterator[Quad]:
        self.expect("punct", "{")
        while not self.is_punct("}"):
            if self.lex.peek()[0] == "eof":
                raise self.error("unterminated graph block")
            yield from self.triples()
            if self.is_punct("."):
                self.lex.next()
            elif not self.is_punct("}"):
                raise self.error(f"expected '.' or '}}', found {self.lex.peek()[1] or 'end of input'!r}")
        self.lex.next()
        self.graph = None

    def triples(self) -> Iterator[Quad]:
        if self.is_punct("["):
            self.lex.next()
            node = self.fresh_blank()
            if not self.is_punct("]"):
                yield from self.predicate_object_list(node)
            self.expect("punct", "]")
            tok = self.lex.peek()
            if not (tok[0] == "punct" and tok[1] in ".}"):
                yield from self.predicate_object_list(node)
            return
        yield from self.predicate_object_list(self.subject(self.lex.next()))

    def subject(self, tok):
        if tok[0] == "bnode":
            return self.blank(tok[1][2:])
        if tok[0] == "punct" and tok[1] == "(":
            raise self.error("collections are not supported")
        return self.iri_token(tok)

    def predicate_object_list(self, subj) -> Iterator[Quad]:
        while True:
            pred = self.verb()
            while True:
                obj, nested = self.object()
                yield from nested
                yield Quad(subj, pred, obj, self.graph)
                if not self.is_punct(","):
                    break
                self.lex.next()
            if not self.is_punct(";"):
                return
            while self.is_punct(";"):
                self.lex.next()
            tok = self.lex.peek()
            if tok[0] == "punct" and tok[1] in ".]}":
                return

    def verb(self) -> IRI:
        tok = self.lex.next()
        if tok == ("word", "a"):
            return IRI(RDF_TYPE)
        return self.iri_token(tok)

    def object(self):
        tok = self.lex.next()
        kind, value = tok
        if kind in ("iri", "pname"):
            return self.iri_token(tok), ()
        if kind == "bnode":
            return self.blank(value[2:]), ()
        if kind in ("str1", "str2", "long1", "long2"):
            return self.literal(tok), ()
        if kind in _NUMERIC_TYPES:
            return Literal(value, datatype=_NUMERIC_TYPES[kind]), ()
        if kind == "word" and value in ("true", "false"):
            return Literal(value, datatype=XSD + "boolean"), ()
        if kind == "punct" and value == "[":
            node = self.fresh_blank()
            nested = []
            if not self.is_punct("]"):
                nested = list(self.predicate_object_list(node))
            self.expect("punct", "]")
            return node, nested
        if kind == "punct" and value == "(":
            raise self.error("collections are not supported")
        raise self.error(f"unexpected {value or 'end of input'!r} in object position")


_VALID_ESCAPE_RE = re.compile(r"""\\(?:[tbnrf"'\\]|u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8})""")


def _bad_escape(body: str) -> bool:
    return "\\" in _VALID_ESCAPE_RE.sub("", body)


def iter_trig(stream: BinaryIO, base: str | None = None) -> Iterator[Quad]:
    return _TrigParser(stream, base).document()


def parse_trig(stream: BinaryIO, base: str | None = None) -> QuadDocument:
    return QuadDocument(list(iter_trig(stream, base)), "trig")


def parse_trig_string(text: str, base: str | None = None) -> QuadDocument:
    return parse_trig(io.BytesIO(text.encode("utf-8")), base)
