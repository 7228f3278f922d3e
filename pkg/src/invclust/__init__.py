"""Clustering of student submissions via dynamic invariants and anonymized ASTs."""

__version__ = "0.1.0"
