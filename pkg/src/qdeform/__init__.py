"""Exact computations with pointed Hopf algebras built from diagonal braided data."""

__version__ = "0.1.0"
