"""Generic Newton polygons and Hasse polynomials for exponential sums."""

__version__ = "0.1.0"
