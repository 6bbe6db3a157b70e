"""Exact Siegel theta series of the eight self-dual rank-16 lattices."""

__version__ = "0.1.0"
