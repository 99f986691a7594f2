"""Finite lattices, their congruences, and refinement properties of
congruence semilattices."""

__version__ = "0.1.0"
