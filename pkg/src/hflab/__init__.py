"""Exact construction and verification of Gamma-graded Hopf algebras built from
quantum linear spaces."""

__version__ = "0.1.0"
