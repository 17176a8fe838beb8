"""Implicit matrix representations by interpolation, ray shooting and
randomized Chow-form implicitization."""

__version__ = "0.1.0"
