"""Dense univariate polynomials (index = degree)."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from ..errors import ModeError
from .poly import MultiPoly
from .scalar import EXACT, FLOAT, check_mode, coerce


class UniPoly:
    __slots__ = ("coeffs", "mode", "var")

    def __init__(self, coeffs: Sequence = (), mode: str = EXACT, var: str = "t"):
        self.mode = check_mode(mode)
        self.var = var
        cs = [coerce(c, mode) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: List = cs

    @classmethod
    def from_roots(cls, roots, mode=EXACT, var="t"):
        p = cls([1], mode, var)
        for r in roots:
            p = p * cls([-r, 1], mode, var)
        return p

    @classmethod
    def from_multipoly(cls, p: MultiPoly, var=None):
        if p.nvars != 1:
            raise ValueError("expected a univariate MultiPoly")
        deg = p.total_degree()
        cs = [0] * (deg + 1) if deg >= 0 else []
        for m, c in p.terms.items():
            cs[m[0]] = c
        return cls(cs, p.mode, var or p.variables[0])

    def to_multipoly(self, variables=None) -> MultiPoly:
        variables = tuple(variables or (self.var,))
        i = variables.index(self.var)
        n = len(variables)
        return MultiPoly(variables,
                         {tuple(k if j == i else 0 for j in range(n)): c
                          for k, c in enumerate(self.coeffs)}, self.mode)

    # -- properties ---------------------------------------------------------

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def max_norm(self):
        return max((abs(float(c)) for c in self.coeffs), default=0.0)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.mode == other.mode and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.mode, tuple(self.coeffs)))

    def __repr__(self):
        return f"UniPoly({self.coeffs!r}, mode={self.mode!r}, var={self.var!r})"

    def __str__(self):
        return str(self.to_multipoly())

    # -- arithmetic -----------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, UniPoly):
            if other.mode != self.mode:
                raise ModeError(f"cannot combine {self.mode} and {other.mode} polynomials")
            return other
        return UniPoly([other], self.mode, self.var)

    def _new(self, cs):
        return UniPoly(cs, self.mode, self.var)

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return self._new([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                          for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = coerce(other, self.mode)
            return self._new([a * c for a in self.coeffs])
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return self._new([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = self._new([1])
        for _ in range(k):
            out = out * self
        return out

    def _div(self, a, b):
        return a / b if self.mode == FLOAT else Fraction(a) / b

    def divmod(self, d: "UniPoly"):
        d = self._lift(d)
        if not d.coeffs:
            raise ZeroDivisionError("division by zero polynomial")
        r = list(self.coeffs)
        q = [0] * max(len(r) - len(d.coeffs) + 1, 0)
        dl = d.coeffs[-1]
        dd = d.degree()
        for k in range(len(q) - 1, -1, -1):
            c = self._div(r[k + dd], dl)
            q[k] = c
            if c:
                for j, b in enumerate(d.coeffs):
                    r[k + j] -= c * b
            r[k + dd] = 0
        return self._new(q), self._new(r[:dd] if dd > 0 else [])

    def __floordiv__(self, d):
        return self.divmod(d)[0]

    def __mod__(self, d):
        return self.divmod(d)[1]

    def monic(self):
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return self._new([self._div(c, lc) for c in self.coeffs])

    def derivative(self):
        return self._new([k * c for k, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x):
        v = 0
        for c in reversed(self.coeffs):
            v = v * x + c
        return v

    __call__ = evaluate

    def compose_linear(self, a, b):
        """``p(a*x + b)`` by Horner's scheme."""
        lin = self._new([b, a])
        out = self._new([])
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def taylor_shift(self, s):
        """``p(x + s)``."""
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                cs[j] += s * cs[j + 1]
        return self._new(cs)

    def reverse(self):
        """``x^deg * p(1/x)``."""
        return self._new(list(reversed(self.coeffs)))

    def primitive_int(self):
        """Integer coefficient multiple with gcd 1 (exact mode)."""
        import math
        if self.mode != EXACT or not self.coeffs:
            return self
        den = 1
        for c in self.coeffs:
            den = math.lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        return self._new([Fraction(v // g) for v in ints])


def uni_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over the rationals (Euclid with primitive remainders)."""
    if a.mode != EXACT or b.mode != EXACT:
        raise ModeError("exact gcd needs exact polynomials")
    a, b = a.primitive_int(), b.primitive_int()
    while b:
        a, b = b, (a % b).primitive_int()
    return a.monic()


def squarefree_decomposition(p: UniPoly):
    """Yun's algorithm: list of ``(factor, multiplicity)`` with ``p = c * prod f^k``.

    Factors are monic, square-free and pairwise coprime; constant factors
    are dropped.
    """
    if not p:
        raise ValueError("zero polynomial has no square-free decomposition")
    if p.degree() == 0:
        return []
    dp = p.derivative()
    a0 = uni_gcd(p, dp)
    b = p // a0
    c = (dp // a0)
    d = c - b.derivative()
    out = []
    k = 1
    while b.degree() > 0:
        a = uni_gcd(b, d)
        b_next = b // a
        c = d // a
        d = c - b_next.derivative()
        if a.degree() > 0:
            out.append((a, k))
        b = b_next
        k += 1
    return out
