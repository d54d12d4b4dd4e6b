"""Exact computations for complex reflection groups and their Cherednik algebras."""

__version__ = "0.1.0"
