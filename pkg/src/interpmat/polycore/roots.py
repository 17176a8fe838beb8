"""Real root isolation for univariate polynomials.

Exact mode runs Descartes' rule of signs with bisection on each square-free
factor from Yun's decomposition, so every root comes with its
multiplicity.  Float mode uses companion-matrix eigenvalues and clusters
nearby real eigenvalues into one root.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

import numpy as np

from ..errors import ZeroPolynomial
from .scalar import EXACT
from .unipoly import UniPoly, squarefree_decomposition

DEFAULT_EPS = Fraction(1, 2**53)

Domain = Union[None, str, Tuple[object, object]]


@dataclass(frozen=True)
class RealRoot:
    lo: object
    hi: object
    multiplicity: int = 1

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self):
        """True when the root is known exactly (``lo == hi``)."""
        return self.lo == self.hi

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x, slack=0):
        return self.lo - slack <= x <= self.hi + slack

    def __float__(self):
        return float(self.mid)


def _sign(v):
    return (v > 0) - (v < 0)


def _variations(coeffs):
    signs = [_sign(c) for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _descartes_count(f: UniPoly, a: Fraction, b: Fraction) -> int:
    """Upper bound (exact for 0 and 1) on the roots of ``f`` in ``(a, b)``."""
    g = f.compose_linear(b - a, a)
    h = g.reverse().taylor_shift(1)
    return _variations(h.coeffs)


def cauchy_bound(f: UniPoly) -> Fraction:
    lc = abs(f.coeffs[-1])
    b = 1 + max(abs(c) for c in f.coeffs[:-1]) / lc if f.degree() > 0 else Fraction(1)
    p = Fraction(1)
    while p <= b:
        p *= 2
    return p


def _domain_bounds(domain, bound):
    """Return ``(lo, hi, lo_closed, hi_closed)`` clipped to ``(-bound, bound)``."""
    if domain is None or domain == "all":
        return -bound, bound, False, False
    if domain in ("positive", ">0"):
        return Fraction(0), bound, False, False
    if domain in ("nonnegative", ">=0"):
        return Fraction(0), bound, True, False
    lo, hi = domain
    lo = -bound if lo is None else Fraction(lo)
    hi = bound if hi is None else Fraction(hi)
    lo_c, hi_c = True, True
    if lo < -bound:
        lo, lo_c = -bound, False
    if hi > bound:
        hi, hi_c = bound, False
    return lo, hi, lo_c, hi_c


def _try_rational(f, a, b):
    """Exact rational root of ``f`` inside ``[a, b]`` if a simple guess hits one."""
    mid = (a + b) / 2
    for maxden in (1, 2**10, 2**20):
        c = mid.limit_denominator(maxden)
        if a <= c <= b and f.evaluate(c) == 0:
            return c
    return None


def _refine(f, a, b, eps):
    fa, fb = f.evaluate(a), f.evaluate(b)
    while b - a > eps * max(1, abs(a), abs(b)):
        m = (a + b) / 2
        fm = f.evaluate(m)
        if fm == 0:
            return m, m
        if fa != 0:
            if _sign(fa) != _sign(fm):
                b, fb = m, fm
            else:
                a, fa = m, fm
        elif fb != 0:
            if _sign(fb) != _sign(fm):
                a, fa = m, fm
            else:
                b, fb = m, fm
        elif _descartes_count(f, a, m) == 1:
            b, fb = m, fm
        else:
            a, fa = m, fm
    c = _try_rational(f, a, b)
    if c is not None:
        return c, c
    return a, b


def _isolate_squarefree(f: UniPoly, domain, eps) -> List[Tuple[Fraction, Fraction]]:
    f = f.primitive_int()
    if f.degree() <= 0:
        return []
    lo, hi, lo_c, hi_c = _domain_bounds(domain, cauchy_bound(f))
    found = []
    if lo > hi:
        return found
    if lo == hi:
        return [(lo, lo)] if (lo_c and hi_c and f.evaluate(lo) == 0) else []
    if lo_c and f.evaluate(lo) == 0:
        found.append((lo, lo))
    if hi_c and f.evaluate(hi) == 0:
        found.append((hi, hi))
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        v = _descartes_count(f, a, b)
        if v == 0:
            continue
        if v == 1:
            found.append(_refine(f, a, b, eps))
            continue
        m = (a + b) / 2
        if f.evaluate(m) == 0:
            found.append((m, m))
        stack.append((m, b))
        stack.append((a, m))
    return found


def isolate_real_roots(p: UniPoly, domain: Domain = None,
                       eps=DEFAULT_EPS, tol: float = 1e-8) -> List[RealRoot]:
    """Isolate the distinct real roots of ``p`` inside ``domain``.

    ``domain`` is ``None``/``"all"``, ``"positive"`` (``x > 0``), or a
    closed interval ``(lo, hi)`` where ``None`` means unbounded.  Exact
    roots are refined until the interval width is below ``eps`` relative to
    ``max(1, |x|)``; rational roots are detected and returned with
    ``lo == hi``.  Results are sorted by position.
    """
    if not p:
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    if p.mode != EXACT:
        return _float_roots(p, domain, tol)
    eps = Fraction(eps)
    out = []
    for factor, mult in squarefree_decomposition(p):
        for a, b in _isolate_squarefree(factor, domain, eps):
            out.append(RealRoot(a, b, mult))
    out.sort(key=lambda r: (r.lo, r.hi))
    return out


def _in_domain(x, domain):
    if domain is None or domain == "all":
        return True
    if domain in ("positive", ">0"):
        return x > 0
    if domain in ("nonnegative", ">=0"):
        return x >= 0
    lo, hi = domain
    return (lo is None or x >= float(lo)) and (hi is None or x <= float(hi))


def _float_roots(p: UniPoly, domain, tol) -> List[RealRoot]:
    cs = np.array([float(c) for c in reversed(p.coeffs)])
    if cs.size <= 1:
        return []
    # multiple roots split into complex pairs of size ~tol**(1/k)
    loose = np.sqrt(tol)
    cand = []
    for r in np.roots(cs):
        x = float(r.real)
        if abs(r.imag) > loose * max(1.0, abs(x)):
            continue
        size = float(np.polyval(np.abs(cs), abs(x)))
        if abs(np.polyval(cs, x)) <= loose * size:
            cand.append(x)
    cand.sort()
    clusters: List[list] = []
    for x in cand:
        if clusters and abs(x - clusters[-1][-1]) <= loose * max(1.0, abs(x)):
            clusters[-1].append(x)
        else:
            clusters.append([x])
    out = []
    for cl in clusters:
        x = float(np.mean(cl))
        if not _in_domain(x, domain):
            continue
        half = max((max(cl) - min(cl)) / 2, 1e-12 * max(1.0, abs(x)))
        out.append(RealRoot(x - half, x + half, len(cl)))
    return out
