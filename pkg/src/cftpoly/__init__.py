"""Exact eta-power partition polynomials and the polynomized CFT inequality."""

__version__ = "0.1.0"
