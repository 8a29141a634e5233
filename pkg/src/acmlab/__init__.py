"""Exact graded commutative algebra for ACM bundles on hypersurfaces."""

__version__ = "0.1.0"
