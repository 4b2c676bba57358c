"""Symbolic computation in graph C*-algebras and Cuntz algebras."""

__version__ = "0.1.0"
