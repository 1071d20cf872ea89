"""Minimal RDF 1.1 dataset model."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
XSD = "http://www.w3.org/2001/XMLSchema#"


@dataclass(frozen=True, slots=True)
class IRI:
    value: str


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str


@dataclass(frozen=True, slots=True)
class Literal:
    """A literal has either a datatype or a language tag, never both.

    Plain literals get ``xsd:string`` at construction; language tags are
    lowercased so that hashing and output agree on one canonical form.
    """

    lexical: str
    datatype: str | None = None
    language: str | None = None

    def __post_init__(self):
        if self.language is not None:
            if self.datatype is not None:
                raise ValueError("literal cannot carry both datatype and language")
            object.__setattr__(self, "language", self.language.lower())
        elif self.datatype is None:
            object.__setattr__(self, "datatype", XSD_STRING)


Term = Union[IRI, BlankNode, Literal]


@dataclass(frozen=True, slots=True)
class Quad:
    subject: IRI | BlankNode
    predicate: IRI
    object: Term
    # None is the default graph; it hashes and sorts as the empty string
    graph: IRI | None = None


@dataclass
class QuadDocument:
    quads: list[Quad] = field(default_factory=list)
    source_format: str = "nquads"

    def __iter__(self):
        return iter(self.quads)

    def __len__(self):
        return len(self.quads)

    @classmethod
    def of(cls, quads: Iterable[Quad], source_format: str = "nquads") -> QuadDocument:
        return cls(list(quads), source_format)

    def graphs(self) -> set[str | None]:
        return {q.graph.value if q.graph is not None else None for q in self.quads}
