"""Scalar coercion for the two arithmetic modes.

Exact mode stores :class:`fractions.Fraction` values, float mode stores
Python floats.  A computation never mixes the two.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from ..errors import ModeError

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

#: relative threshold below which a float value counts as zero
FLOAT_ZERO_TOL = 1e-8


def check_mode(mode):
    if mode not in MODES:
        raise ModeError(f"unknown arithmetic mode {mode!r}")
    return mode


def to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        raise ModeError(f"float value {v!r} in exact computation")
    if isinstance(v, Rational):
        return Fraction(int(v.numerator), int(v.denominator))
    if hasattr(v, "numerator") and hasattr(v, "denominator"):
        # gmpy2.mpq and friends
        return Fraction(int(v.numerator), int(v.denominator))
    if isinstance(v, str):
        return Fraction(v)
    raise ModeError(f"cannot use {type(v).__name__} as an exact scalar")


def to_float(v) -> float:
    x = float(v)
    if not math.isfinite(x):
        raise ModeError(f"non-finite value {x!r} in float computation")
    return x


def coerce(v, mode):
    return to_fraction(v) if mode == EXACT else to_float(v)


def is_zero(v, mode, scale=1.0, tol=FLOAT_ZERO_TOL):
    """Exact test in exact mode, ``|v| < tol * scale`` in float mode."""
    if mode == EXACT:
        return v == 0
    return abs(v) < tol * scale
