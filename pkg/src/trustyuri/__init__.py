"""Trusty URIs for files and RDF datasets."""

__version__ = "0.1.0"
