"""Weighted Turán densities, graph Lagrangians, cluster embeddings and flag-algebra certificates."""

__version__ = "0.1.0"
