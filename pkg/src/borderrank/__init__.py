"""Exact and numerical tools around the border rank of 2 x 2 matrix multiplication."""

__version__ = "0.1.0"
