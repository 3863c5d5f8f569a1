"""Exact simplification of nested indefinite sums.

The package decides, for an expression f built from nested sum generators,
whether f is a difference of another such expression, and if not, splits f
into a summable part plus a canonical remainder. All arithmetic is exact.
"""

__version__ = "0.1.0"
