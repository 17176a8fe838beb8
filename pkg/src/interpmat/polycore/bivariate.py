"""Real solutions of zero-dimensional bivariate systems.

Hidden-variable elimination: the resultant in the second variable gives
candidate first coordinates.  Rational candidates are back-substituted
exactly (gcd of the two specialised polynomials); irrational ones are
paired with roots of the resultant in the first variable, and every pair is
kept only if interval evaluation of both equations over its box contains
zero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from ..errors import ModeError, NonZeroDimensional
from .poly import MultiPoly
from .resultant import resultant
from .roots import RealRoot, isolate_real_roots
from .scalar import EXACT
from .unipoly import UniPoly, uni_gcd

BIVARIATE_EPS = Fraction(1, 2**64)


def _ipow(lo, hi, e):
    if e == 0:
        return Fraction(1), Fraction(1)
    a, b = lo**e, hi**e
    if e % 2 == 0 and lo <= 0 <= hi:
        return Fraction(0), max(a, b)
    return min(a, b), max(a, b)


def _imul(x, y):
    ps = (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
    return min(ps), max(ps)


def interval_eval(p: MultiPoly, box) -> Tuple[Fraction, Fraction]:
    """Enclosure of ``p`` over a box of ``(lo, hi)`` pairs (exact endpoints)."""
    lo_sum, hi_sum = Fraction(0), Fraction(0)
    for m, c in p.terms.items():
        iv = (Fraction(c), Fraction(c))
        for (lo, hi), e in zip(box, m):
            if e:
                iv = _imul(iv, _ipow(Fraction(lo), Fraction(hi), e))
        lo_sum += iv[0]
        hi_sum += iv[1]
    return lo_sum, hi_sum


def _contains_zero(p, box):
    lo, hi = interval_eval(p, box)
    return lo <= 0 <= hi


def _as_uni(p: MultiPoly, var) -> UniPoly:
    return UniPoly.from_multipoly(p, var)


def bivariate_solve(g1: MultiPoly, g2: MultiPoly, eps=BIVARIATE_EPS) -> List[Tuple[RealRoot, RealRoot]]:
    """All real common roots of ``g1`` and ``g2`` as ``(t1, t2)`` root pairs."""
    if g1.mode != EXACT or g2.mode != EXACT:
        raise ModeError("bivariate_solve runs in exact mode")
    if g1.variables != g2.variables or g1.nvars != 2:
        raise ValueError("bivariate_solve needs two polynomials in the same two variables")
    v1, v2 = g1.variables
    if not g1 or not g2:
        raise NonZeroDimensional("an equation is identically zero")

    if g1.degree_in(v2) <= 0 and g2.degree_in(v2) <= 0:
        h = uni_gcd(_as_uni(g1.to_univariate(v2)[0], v1), _as_uni(g2.to_univariate(v2)[0], v1))
        if h.degree() > 0 and isolate_real_roots(h):
            raise NonZeroDimensional("common factor free of the second variable")
        return []

    r1 = resultant(g1, g2, v2)
    if not r1:
        raise NonZeroDimensional("resultant vanishes identically")
    if r1.is_constant():
        return []
    roots1 = isolate_real_roots(_as_uni(r1, v1), eps=eps)

    roots2 = None
    sols = []
    for r in roots1:
        if r.is_exact:
            h1 = _as_uni(g1.partial_eval({v1: r.lo}), v2)
            h2 = _as_uni(g2.partial_eval({v1: r.lo}), v2)
            if not h1 and not h2:
                raise NonZeroDimensional(f"whole line {v1} = {r.lo} is a solution")
            h = uni_gcd(h1, h2) if (h1 and h2) else (h1 or h2).monic()
            if h.degree() <= 0:
                continue
            for s in isolate_real_roots(h, eps=eps):
                sols.append((RealRoot(r.lo, r.hi, r.multiplicity), s))
            continue
        if roots2 is None:
            r2 = resultant(g1, g2, v1)
            roots2 = isolate_real_roots(_as_uni(r2, v2), eps=eps) if (r2 and not r2.is_constant()) else []
        for s in roots2:
            box = ((r.lo, r.hi), (s.lo, s.hi))
            if _contains_zero(g1, box) and _contains_zero(g2, box):
                sols.append((r, s))
    sols.sort(key=lambda ab: (ab[0].lo, ab[1].lo))
    return sols
