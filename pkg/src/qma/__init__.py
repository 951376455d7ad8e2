"""Exact computations in multiparameter quantum matrix algebras at roots of unity."""

__version__ = "0.1.0"
