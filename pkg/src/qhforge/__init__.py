"""Exact computations with quasi-hereditary algebras over prime fields."""

__version__ = "0.1.0"
