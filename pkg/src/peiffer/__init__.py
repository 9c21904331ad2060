"""Exact verification toolkit for simplicial algebra: Dold–Kan via exterior
coefficients, operadic simplicial algebras, Peiffer pairings in simplicial
groups and the near-ring model of the group-valued case."""

__version__ = "0.1.0"
