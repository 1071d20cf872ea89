"""Modules RA and RB: hashing RDF datasets independently of their syntax.

The hash input is built from *preprocessed* quads: every occurrence of the
artifact code inside an IRI is replaced by a single space, blank nodes are not
allowed, and default-graph triples get the empty string as graph. Quads are
sorted, each one is written as four newline-terminated lines (graph, subject,
predicate, object) and SHA-256 is taken over the UTF-8 result.

Transformation runs the same pipeline in reverse: self-references to the base
URI get a placeholder where the code will go, blank nodes become
``<uri-with-placeholder>#_<n>``, the placeholder hashes as a space, and is then
replaced by the computed code everywhere.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .codec import (
    ArtifactCode,
    TrustyUriCandidate,
    encode_hash_tail,
    extract_artifact_code,
    is_base64_char,
)
from .errors import InvalidInputError, ModuleConstraintError, RdfSyntaxError
from .rdf.model import IRI, BlankNode, Literal, Quad, QuadDocument
from .report import CheckReport, Verdict

# Stand-in for the artifact code during transformation. IRIs cannot contain
# spaces, so the placeholder is unambiguous and already has its hashing form.
PLACEHOLDER = " "

R_MODULES = ("RA", "RB")

IRI_OBJECT = 0
LITERAL_OBJECT = 1
# literals with a language tag have no datatype and sort before typed ones
LANG_TAGGED = 0
DATATYPED = 1


class PreprocessedQuad(NamedTuple):
    """Blank-free quad with the artifact code already blanked out.

    Field order is chosen so that plain tuple comparison *is* the canonical
    statement order: graph, subject, predicate, IRI objects before literals,
    object IRI or literal label, language-tagged before datatyped, then the
    tag or datatype string. Python compares strings by code point with the
    shorter string first on a common prefix.
    """

    graph: str
    subject: str
    predicate: str
    object_kind: int
    object_value: str
    tag_kind: int = 0
    tag: str = ""

    @property
    def is_literal(self) -> bool:
        return self.object_kind == LITERAL_OBJECT


def compare_quads(a: PreprocessedQuad, b: PreprocessedQuad) -> int:
    return (a > b) - (a < b)


def escape_label(label: str) -> str:
    return label.replace("\\", "\\\\").replace("\n", "\\n")


def unescape_label(text: str) -> str:
    if "\\" not in text:
        return text
    # after splitting on escaped backslashes, any backslash left starts "\n"
    return "\\".join(part.replace("\\n", "\n") for part in text.split("\\\\"))


def serialize_statement(q: PreprocessedQuad) -> str:
    if q.object_kind == IRI_OBJECT:
        obj = q.object_value
    elif q.tag_kind == LANG_TAGGED:
        obj = f"@{q.tag} {escape_label(q.object_value)}"
    else:
        obj = f"^{q.tag} {escape_label(q.object_value)}"
    return f"{q.graph}\n{q.subject}\n{q.predicate}\n{obj}\n"


def parse_statement(text: str) -> PreprocessedQuad:
    """Inverse of :func:`serialize_statement`."""
    g, s, p, obj, rest = text.split("\n", 4)
    if rest:
        raise ValueError("a statement has exactly four lines")
    return PreprocessedQuad(g, s, p, *_parse_object_line(obj))


def _parse_object_line(obj: str) -> tuple:
    # IRIs are absolute (they start with a scheme), so ^ and @ mark literals
    if obj[:1] == "^":
        tag, _, label = obj[1:].partition(" ")
        return LITERAL_OBJECT, unescape_label(label), DATATYPED, tag
    if obj[:1] == "@":
        tag, _, label = obj[1:].partition(" ")
        return LITERAL_OBJECT, unescape_label(label), LANG_TAGGED, tag
    return IRI_OBJECT, obj, 0, ""


def literal_fields(lit: Literal) -> tuple:
    if lit.language is not None:
        return LITERAL_OBJECT, lit.lexical, LANG_TAGGED, lit.language
    return LITERAL_OBJECT, lit.lexical, DATATYPED, lit.datatype


class StatementHasher:
    """Incremental SHA-256 over sorted statements.

    Equal consecutive statements are hashed once (a dataset is a set). With
    ``strict_order`` an out-of-order statement raises ``ValueError``.
    """

    def __init__(self, strict_order: bool = False):
        self._sha = hashlib.sha256()
        self._prev: PreprocessedQuad | None = None
        self.strict_order = strict_order
        self.count = 0

    def update(self, q: PreprocessedQuad) -> bool:
        prev = self._prev
        if prev is not None:
            if q == prev:
                return False
            if q < prev and self.strict_order:
                raise ValueError(f"statement {self.count + 1} is out of order")
        self._prev = q
        self.count += 1
        self._sha.update(serialize_statement(q).encode("utf-8"))
        return True

    def hash_part(self) -> str:
        return encode_hash_tail(self._sha.digest())


def hash_preprocessed(quads: Iterable[PreprocessedQuad]) -> str:
    """Sort, deduplicate and hash preprocessed quads; returns the 43-char tail."""
    h = StatementHasher()
    for q in sorted(quads):
        h.update(q)
    return h.hash_part()


def _check_module(module: str) -> None:
    if module not in R_MODULES:
        raise InvalidInputError(f"not an RDF module: {module!r}")


# -- transformation


@dataclass
class TransformPlan:
    """Rewrites input quads so that the placeholder marks the code position."""

    base_uri: str
    module: str = "RA"
    blank_node_map: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        _check_module(self.module)
        if not self.base_uri or PLACEHOLDER in self.base_uri:
            raise InvalidInputError(f"unusable base URI {self.base_uri!r}")
        sep = "." if is_base64_char(self.base_uri[-1]) else ""
        self.placeholder_uri = self.base_uri + sep + PLACEHOLDER

    def rewrite_iri(self, value: str) -> str:
        if PLACEHOLDER in value:
            raise InvalidInputError(f"IRI contains a space: {value!r}")
        base = self.base_uri
        if value.startswith(base) and (len(value) == len(base) or not is_base64_char(value[len(base)])):
            return self.placeholder_uri + value[len(base):]
        return value

    def skolem_iri(self, label: str) -> str:
        n = self.blank_node_map.get(label)
        if n is None:
            n = self.blank_node_map[label] = len(self.blank_node_map) + 1
        return f"{self.placeholder_uri}#_{n}"

    def _node(self, term) -> str:
        if isinstance(term, BlankNode):
            return self.skolem_iri(term.label)
        return self.rewrite_iri(term.value)

    def rewrite(self, quad: Quad) -> PreprocessedQuad:
        if isinstance(quad.graph, BlankNode):
            raise RdfSyntaxError("blank node used as graph label")
        graph = self.rewrite_iri(quad.graph.value) if quad.graph is not None else ""
        if self.module == "RB" and graph != self.placeholder_uri:
            raise ModuleConstraintError(
                "module RB needs every statement in the graph named by the base URI"
            )
        subj = self._node(quad.subject)
        pred = self.rewrite_iri(quad.predicate.value)
        obj = quad.object
        if isinstance(obj, Literal):
            return PreprocessedQuad(graph, subj, pred, *literal_fields(obj))
        return PreprocessedQuad(graph, subj, pred, IRI_OBJECT, self._node(obj))

    def rewrite_all(self, quads: Iterable[Quad]) -> Iterator[PreprocessedQuad]:
        for q in quads:
            yield self.rewrite(q)

    def code_for(self, hash_part: str) -> ArtifactCode:
        return ArtifactCode(self.module, hash_part)

    def trusty_uri(self, code: ArtifactCode) -> str:
        return self.placeholder_uri.replace(PLACEHOLDER, str(code))


def restore_quad(q: PreprocessedQuad, replacement: str) -> Quad:
    """Turn a preprocessed quad back into a regular one, filling in ``replacement``."""

    def iri(v):
        return IRI(v.replace(PLACEHOLDER, replacement))

    if q.object_kind == IRI_OBJECT:
        obj = iri(q.object_value)
    elif q.tag_kind == LANG_TAGGED:
        obj = Literal(q.object_value, language=q.tag)
    else:
        obj = Literal(q.object_value, datatype=q.tag)
    return Quad(iri(q.subject), iri(q.predicate), obj, iri(q.graph) if q.graph else None)


@dataclass
class TransformResult:
    uri: str
    code: ArtifactCode
    document: QuadDocument


def transform_rdf(doc: QuadDocument | Iterable[Quad], base_uri: str, module: str = "RA") -> TransformResult:
    """Give a dataset its trusty URI, rewriting self-references and blank nodes.

    The returned document is sorted in canonical order with duplicates
    removed, which is also the order in which trusty files are written.
    """
    plan = TransformPlan(base_uri, module)
    pre = sorted(set(plan.rewrite_all(doc)))
    h = StatementHasher()
    for q in pre:
        h.update(q)
    code = plan.code_for(h.hash_part())
    out = QuadDocument([restore_quad(q, str(code)) for q in pre], "nquads")
    return TransformResult(plan.trusty_uri(code), code, out)


# -- verification


@dataclass
class CheckPlan:
    """Preprocessing for verification against one candidate code."""

    candidate: TrustyUriCandidate

    def __post_init__(self):
        code = self.candidate.code
        if code is None or code.module not in R_MODULES:
            raise InvalidInputError("candidate is not a potential RA/RB trusty URI")
        self.code = code
        self._code_str = str(code)
        # a bare code (e.g. taken from a file name) tells us nothing about the prefix
        self._full_uri = self.candidate.uri if self.candidate.prefix else None

    def blank(self, value: str) -> str:
        return value.replace(self._code_str, PLACEHOLDER) if self._code_str in value else value

    def _node(self, term) -> str:
        if isinstance(term, BlankNode):
            raise ModuleConstraintError("blank nodes are not allowed in trusty RDF content")
        return self.blank(term.value)

    def graph_ok(self, graph: IRI | None) -> bool:
        if graph is None:
            return False
        if self._full_uri is not None:
            return graph.value == self._full_uri
        return graph.value.endswith(self._code_str)

    def preprocess(self, quad: Quad) -> PreprocessedQuad:
        """Raises ModuleConstraintError on blank nodes or a broken RB graph rule."""
        if self.code.module == "RB" and not self.graph_ok(quad.graph):
            raise _GraphConstraint("module RB requires every statement in the graph named by the trusty URI")
        graph = self._node(quad.graph) if quad.graph is not None else ""
        obj = quad.object
        if isinstance(obj, Literal):
            if self._code_str in obj.lexical:
                raise _GraphConstraint("artifact code occurs inside a literal")
            fields = literal_fields(obj)
        else:
            fields = (IRI_OBJECT, self._node(obj))
        return PreprocessedQuad(graph, self._node(quad.subject), self.blank(quad.predicate.value), *fields)


class _GraphConstraint(ModuleConstraintError):
    """Content is well-formed but cannot match the code; reported as invalid."""


def as_candidate(uri_or_candidate) -> TrustyUriCandidate:
    if isinstance(uri_or_candidate, TrustyUriCandidate):
        return uri_or_candidate
    if isinstance(uri_or_candidate, ArtifactCode):
        uri_or_candidate = str(uri_or_candidate)
    return extract_artifact_code(uri_or_candidate)


def run_check(candidate, preprocessed_source, subject=None) -> CheckReport:
    """Shared verdict logic; ``preprocessed_source(plan)`` yields the hash tail."""
    candidate = as_candidate(candidate)
    if not candidate.is_potential:
        return CheckReport.error(f"not a potential trusty URI ({candidate.reason})", subject=subject)
    try:
        plan = CheckPlan(candidate)
    except InvalidInputError as e:
        return CheckReport.error(str(e), candidate.code, subject)
    try:
        tail = preprocessed_source(plan)
    except _GraphConstraint as e:
        return CheckReport(Verdict.INVALID, candidate.code, None, str(e), subject)
    except (ModuleConstraintError, RdfSyntaxError, ValueError, OSError) as e:
        return CheckReport.error(str(e), candidate.code, subject)
    return CheckReport.compare(candidate.code, ArtifactCode(candidate.code.module, tail), subject)


def check_rdf(doc: QuadDocument | Iterable[Quad], candidate, subject=None) -> CheckReport:
    """Verify a dataset against a potential RA/RB trusty URI (or bare code)."""

    def compute(plan: CheckPlan) -> str:
        return hash_preprocessed({plan.preprocess(q) for q in doc})

    return run_check(candidate, compute, subject)

