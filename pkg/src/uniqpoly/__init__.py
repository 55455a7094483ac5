"""Uniqueness polynomials: exact structure analysis and theorem-backed decisions."""

__version__ = "0.1.0"
