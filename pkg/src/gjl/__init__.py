"""Goedel justification logic: exact fuzzy semantics, proof checking and decision tools."""

__version__ = "0.1.0"
