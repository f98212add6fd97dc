"""Finite coGalois and Kneser triples: operator groups, 1-cocycles and their classification."""

__version__ = "0.1.0"
