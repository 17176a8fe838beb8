"""Sylvester resultants and extraction of linear-factor powers."""

from __future__ import annotations

from typing import Sequence

from ..errors import DegenerateInput, ModeError, NotDivisible
from .linalg import bareiss_det
from .poly import MultiPoly
from .scalar import EXACT
from .unipoly import UniPoly


def _strip(coeffs):
    cs = list(coeffs)
    while cs and not cs[-1]:
        cs.pop()
    return cs


def sylvester_matrix(p: Sequence, q: Sequence, zero):
    """``(m+n)``-square Sylvester matrix of ``p`` (degree m) and ``q`` (degree n).

    Coefficient lists are indexed by degree.
    """
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(p)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(q)):
            row[i + k] = c
        rows.append(row)
    return rows


def sylvester_resultant(p: Sequence[MultiPoly], q: Sequence[MultiPoly]) -> MultiPoly:
    """Resultant of two polynomials in an eliminated variable.

    ``p`` and ``q`` are coefficient lists (index = degree in the eliminated
    variable) whose entries are polynomials over a common ring.  The
    Sylvester determinant is expanded fraction-free (Bareiss).
    """
    p, q = _strip(p), _strip(q)
    if not p or not q:
        raise DegenerateInput("resultant of an identically zero polynomial")
    ring = p[0].variables
    mode = p[0].mode
    for c in list(p) + list(q):
        if c.mode != mode:
            raise ModeError("mixed modes in resultant")
        if c.variables != ring:
            raise ValueError("resultant coefficients must share one ring")
    zero = MultiPoly.zero(ring, mode)
    one = MultiPoly.constant(1, ring, mode)
    m, n = len(p) - 1, len(q) - 1
    if m == 0:
        return p[0] ** n
    if n == 0:
        return q[0] ** m
    mat = sylvester_matrix(p, q, zero)
    return bareiss_det(mat, lambda a, b: a.exact_div(b), zero, one)


def resultant(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """``Res_var(f, g)`` as a polynomial in the remaining variables."""
    return sylvester_resultant(f.to_univariate(var), g.to_univariate(var))


def uni_resultant(f: UniPoly, g: UniPoly):
    """Scalar resultant of two univariate polynomials."""
    fp = [MultiPoly.constant(c, (), f.mode) for c in f.coeffs]
    gp = [MultiPoly.constant(c, (), g.mode) for c in g.coeffs]
    r = sylvester_resultant(fp, gp)
    return r.constant_term()


def exact_divide_power(num: MultiPoly, lin: MultiPoly, k: int) -> MultiPoly:
    """``q`` with ``q * lin**k == num``; raises :class:`NotDivisible`."""
    if num.mode != EXACT or lin.mode != EXACT:
        raise ModeError("exact_divide_power requires exact mode")
    if lin.total_degree() != 1:
        raise ValueError("divisor must have total degree 1")
    q = num
    for _ in range(k):
        q = q.exact_div(lin)
    return q


def strip_linear_power(num: MultiPoly, lin: MultiPoly, kmax: int):
    """Remove the largest power ``lin**k`` (``k <= kmax``) dividing ``num``.

    Returns ``(quotient, k)``.
    """
    q, k = num, 0
    while k < kmax:
        try:
            q = exact_divide_power(q, lin, 1)
        except NotDivisible:
            break
        k += 1
    return q, k
