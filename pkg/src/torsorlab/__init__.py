"""Finite models of torsors under abelian varieties built from regular homomorphisms."""

__version__ = "0.1.0"
