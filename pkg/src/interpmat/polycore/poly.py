"""Sparse multivariate polynomials over exact rationals or floats.

Monomials are exponent tuples.  The single canonical order everywhere is
graded lexicographic: first total degree, then lexicographic on the
exponent vector (``x1 > x2 > ...``).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from ..errors import ModeError, NotDivisible
from .scalar import EXACT, FLOAT, check_mode, coerce

Monomial = Tuple[int, ...]


def grlex_key(m: Monomial):
    return (sum(m), m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def eval_monomial(m: Monomial, point) -> object:
    v = 1
    for x, e in zip(point, m):
        if e:
            v = v * x**e
    return v


class MultiPoly:
    """Immutable sparse polynomial ``{exponents: coefficient}``.

    ``variables`` fixes the meaning of each exponent slot.  Zero
    coefficients are never stored, so two polynomials over the same
    variables are equal iff their term maps are equal.
    """

    __slots__ = ("variables", "terms", "mode", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None,
                 mode: str = EXACT):
        self.variables = tuple(variables)
        self.mode = check_mode(mode)
        n = len(self.variables)
        clean: Dict[Monomial, object] = {}
        if terms:
            for m, c in terms.items():
                m = tuple(int(e) for e in m)
                if len(m) != n or any(e < 0 for e in m):
                    raise ValueError(f"bad exponent vector {m} for {n} variables")
                c = coerce(c, mode)
                if c != 0:
                    clean[m] = clean.get(m, 0) + c
                    if clean[m] == 0:
                        del clean[m]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables, terms, mode):
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.variables = variables
        p.terms = terms
        p.mode = mode
        p._hash = None
        return p

    @classmethod
    def zero(cls, variables, mode=EXACT):
        return cls._raw(tuple(variables), {}, check_mode(mode))

    @classmethod
    def constant(cls, c, variables, mode=EXACT):
        return cls(variables, {(0,) * len(variables): c}, mode)

    @classmethod
    def var(cls, name, variables, mode=EXACT):
        variables = tuple(variables)
        i = variables.index(name)
        m = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {m: 1}, mode)

    @classmethod
    def gens(cls, variables, mode=EXACT):
        return [cls.var(v, variables, mode) for v in variables]

    # -- basic properties -------------------------------------------------

    @property
    def nvars(self):
        return len(self.variables)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(sum(m) == 0 for m in self.terms)

    def total_degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, var) -> int:
        i = self.variables.index(var) if isinstance(var, str) else var
        return max((m[i] for m in self.terms), default=-1)

    def monomials(self):
        """Monomials in ascending graded-lex order."""
        return sorted(self.terms, key=grlex_key)

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=grlex_key)

    def leading_coeff(self):
        return self.terms[self.leading_monomial()] if self.terms else 0

    def coeff(self, m: Monomial):
        return self.terms.get(tuple(m), 0)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def max_norm(self) -> float:
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    # -- coercion ---------------------------------------------------------

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.mode != self.mode:
                raise ModeError(f"cannot combine {self.mode} and {other.mode} polynomials")
            if other.variables != self.variables:
                raise ValueError(
                    f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        return MultiPoly.constant(other, self.variables, self.mode)

    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-embed into a ring whose variables include all used ones."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        idx = {v: i for i, v in enumerate(variables)}
        terms = {}
        for m, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.variables, m):
                if e:
                    if v not in idx:
                        raise ValueError(f"variable {v} missing from target ring")
                    new[idx[v]] = e
            terms[tuple(new)] = c
        return MultiPoly._raw(variables, terms, self.mode)

    def to_mode(self, mode) -> "MultiPoly":
        if mode == self.mode:
            return self
        if mode == FLOAT:
            return MultiPoly(self.variables, {m: float(c) for m, c in self.terms.items()}, FLOAT)
        return MultiPoly(self.variables,
                         {m: Fraction(c).limit_denominator(10**12) for m, c in self.terms.items()},
                         EXACT)

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return MultiPoly._raw(self.variables, {m: -c for m, c in self.terms.items()}, self.mode)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s == 0:
                terms.pop(m, None)
            else:
                terms[m] = s
        return MultiPoly._raw(self.variables, terms, self.mode)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = coerce(other, self.mode)
            if c == 0:
                return MultiPoly.zero(self.variables, self.mode)
            return MultiPoly._raw(self.variables,
                                  {m: a * c for m, a in self.terms.items()}, self.mode)
        other = self._lift(other)
        terms: Dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return MultiPoly._raw(self.variables,
                              {m: c for m, c in terms.items() if c != 0}, self.mode)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            return self.exact_div(other)
        c = coerce(other, self.mode)
        if c == 0:
            raise ZeroDivisionError("division of polynomial by zero")
        return self * (1 / c if self.mode == FLOAT else Fraction(1) / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.variables, self.mode)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return (self.variables == other.variables and self.mode == other.mode
                    and self.terms == other.terms)
        try:
            return self == self._lift(other)
        except (ModeError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def exact_div(self, d: "MultiPoly") -> "MultiPoly":
        """Quotient ``q`` with ``q * d == self``; raises :class:`NotDivisible`."""
        q, r = self.divmod_lt(d)
        if r:
            raise NotDivisible("polynomial division is not exact")
        return q

    def divmod_lt(self, d: "MultiPoly"):
        """Division by leading terms in graded-lex order.

        Stops (returning the remainder so far) as soon as a leading term of
        the running remainder is not divisible by ``lt(d)``; the remainder is
        therefore only meaningful as a zero/non-zero exactness flag.
        """
        d = self._lift(d)
        if not d.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        lm = d.leading_monomial()
        lc = d.terms[lm]
        q: Dict[Monomial, object] = {}
        r = dict(self.terms)
        dterms = list(d.terms.items())
        while r:
            m = max(r, key=grlex_key)
            if not mono_divides(lm, m):
                break
            qm = mono_div(m, lm)
            qc = r[m] / lc if self.mode == FLOAT else Fraction(r[m]) / lc
            q[qm] = qc
            for dm, dc in dterms:
                mm = mono_mul(qm, dm)
                s = r.get(mm, 0) - qc * dc
                if mm == m or s == 0 or (self.mode == FLOAT and abs(s) < 1e-300):
                    r.pop(mm, None)
                else:
                    r[mm] = s
        return (MultiPoly._raw(self.variables, q, self.mode),
                MultiPoly._raw(self.variables, r, self.mode))

    # -- evaluation and substitution -------------------------------------

    def evaluate(self, point):
        """Evaluate at a point given as a sequence or ``{name: value}``."""
        if isinstance(point, Mapping):
            point = [point[v] for v in self.variables]
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(point)}")
        if self.mode == EXACT:
            point = [coerce(x, EXACT) if isinstance(x, (int, float)) else x for x in point]
        total = 0
        for m, c in self.terms.items():
            total += c * eval_monomial(m, point)
        return total

    __call__ = evaluate

    def compose(self, values: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``variables[i] -> values[i]`` (all in one target ring)."""
        if len(values) != self.nvars:
            raise ValueError("compose needs one value per variable")
        target = values[0]
        powers = [dict() for _ in values]

        def power(i, e):
            if e not in powers[i]:
                powers[i][e] = values[i] ** e
            return powers[i][e]

        out = MultiPoly.zero(target.variables, target.mode)
        for m, c in self.terms.items():
            term = MultiPoly.constant(c, target.variables, target.mode)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def partial_eval(self, assignment: Mapping[str, object]) -> "MultiPoly":
        """Fix some variables to scalars; result lives in the remaining ring."""
        keep = [v for v in self.variables if v not in assignment]
        keep_idx = [self.variables.index(v) for v in keep]
        fixed = [(i, assignment[v]) for i, v in enumerate(self.variables) if v in assignment]
        terms: Dict[Monomial, object] = {}
        for m, c in self.terms.items():
            val = c
            for i, x in fixed:
                if m[i]:
                    val = val * x ** m[i]
            key = tuple(m[i] for i in keep_idx)
            terms[key] = terms.get(key, 0) + val
        return MultiPoly(keep, terms, self.mode)

    def to_univariate(self, var) -> list:
        """Coefficients (index = degree in ``var``) over the other variables."""
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        deg = self.degree_in(i)
        coeffs = [dict() for _ in range(max(deg, 0) + 1)]
        for m, c in self.terms.items():
            coeffs[m[i]][m[:i] + m[i + 1:]] = c
        return [MultiPoly._raw(rest, t, self.mode) for t in coeffs]

    @classmethod
    def from_univariate(cls, coeffs, var, variables):
        """Inverse of :meth:`to_univariate`."""
        variables = tuple(variables)
        i = variables.index(var)
        mode = coeffs[0].mode if coeffs else EXACT
        out = {}
        for k, c in enumerate(coeffs):
            for m, a in c.terms.items():
                out[m[:i] + (k,) + m[i:]] = a
        return cls._raw(variables, out, mode)

    def diff(self, var) -> "MultiPoly":
        i = self.variables.index(var) if isinstance(var, str) else var
        terms = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = m[:i] + (m[i] - 1,) + m[i + 1:]
                terms[mm] = c * m[i]
        return MultiPoly._raw(self.variables, terms, self.mode)

    # -- normalization ----------------------------------------------------

    def monic(self) -> "MultiPoly":
        """Scale so the graded-lex leading coefficient is 1."""
        if not self.terms:
            return self
        return self / self.leading_coeff()

    def primitive(self) -> "MultiPoly":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.terms or self.mode != EXACT:
            return self
        den = reduce(math.lcm, (c.denominator for c in self.terms.values()), 1)
        ints = {m: int(c * den) for m, c in self.terms.items()}
        g = reduce(math.gcd, (abs(v) for v in ints.values()), 0)
        lead = ints[self.leading_monomial()]
        sign = -1 if lead < 0 else 1
        return MultiPoly._raw(self.variables,
                              {m: Fraction(sign * v // g) for m, v in ints.items()}, EXACT)

    # -- text -------------------------------------------------------------

    def __str__(self):
        from .parse import format_poly
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({str(self)!r}, vars={list(self.variables)}, mode={self.mode!r})"


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    """Functional form of ``a + b``, ``a - b`` and ``a * b``."""
    if a.mode != b.mode:
        raise ModeError(f"cannot combine {a.mode} and {b.mode} polynomials")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def common_variables(polys: Iterable[MultiPoly]):
    """Union of variable names, keeping first-seen order."""
    seen = []
    for p in polys:
        for v in p.variables:
            if v not in seen:
                seen.append(v)
    return tuple(seen)
