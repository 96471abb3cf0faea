"""Exact computations with injective and Gorenstein representations of quivers."""
__version__ = "0.1.0"
