"""Exact q-series expansion and partition congruence checking."""

__version__ = "0.1.0"
