"""Rank-5 Ramanujan complexes from a division algebra over Q(sqrt(-7)): exact arithmetic, orders, gates, reductions and quotient complexes."""

__version__ = "0.1.0"
