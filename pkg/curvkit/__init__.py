"""Exact-arithmetic construction and certification of semi-symmetric curvature tensors."""

__version__ = "0.1.0"
