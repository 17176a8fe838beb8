"""Monomial supports indexing interpolation matrices, and degree bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Sequence, Tuple

from .errors import ParseError
from .polycore.poly import Monomial, MultiPoly, eval_monomial, grlex_key


def default_variables(n, prefix="x"):
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class MonomialSupport:
    variables: Tuple[str, ...]
    monomials: Tuple[Monomial, ...]
    origin: str = "user"
    _index: dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        mons = tuple(sorted({tuple(int(e) for e in m) for m in self.monomials}, key=grlex_key))
        if len(mons) != len(self.monomials):
            raise ValueError("support contains duplicate monomials")
        for m in mons:
            if len(m) != len(self.variables) or min(m, default=0) < 0:
                raise ValueError(f"bad monomial {m} for variables {self.variables}")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "monomials", mons)
        object.__setattr__(self, "_index", {m: i for i, m in enumerate(mons)})

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __contains__(self, m):
        return tuple(m) in self._index

    def index(self, m) -> int:
        return self._index[tuple(m)]

    @property
    def n(self):
        return len(self.variables)

    def max_degree(self) -> int:
        return max((sum(m) for m in self.monomials), default=0)

    def degrees(self):
        return [sum(m) for m in self.monomials]

    def evaluate(self, point) -> list:
        """The row ``S(x)`` of monomial values at ``point``."""
        return [eval_monomial(m, point) for m in self.monomials]

    def poly_from_vector(self, coeffs, mode="exact") -> MultiPoly:
        return MultiPoly(self.variables,
                         {m: c for m, c in zip(self.monomials, coeffs) if c != 0}, mode)

    def vector_from_poly(self, p: MultiPoly) -> list:
        p = p.with_variables(self.variables)
        missing = [m for m in p.terms if m not in self._index]
        if missing:
            raise ValueError(f"polynomial uses monomials outside the support: {missing}")
        return [p.terms.get(m, 0) for m in self.monomials]

    def to_text(self) -> str:
        return "".join(" ".join(str(e) for e in m) + "\n" for m in self.monomials)


def _monomials_upto(n, deg):
    if n == 0:
        yield ()
        return
    for e in range(deg + 1):
        for rest in _monomials_upto(n - 1, deg - e):
            yield (e,) + rest


def simplex_support(n: int, delta: int, variables: Sequence[str] | None = None) -> MonomialSupport:
    """All monomials of total degree at most ``delta`` in ``n`` variables."""
    if n < 1 or delta < 0:
        raise ValueError("need n >= 1 and delta >= 0")
    variables = tuple(variables) if variables else default_variables(n)
    s = MonomialSupport(variables, tuple(_monomials_upto(n, delta)), f"simplex({delta})")
    assert len(s) == comb(n + delta, n)
    return s


def weighted_simplex_support(weights: Sequence[int], bound: int,
                             variables: Sequence[str] | None = None) -> MonomialSupport:
    """Monomials with ``sum(w_i * a_i) <= bound``.

    Used for parameterizations whose coordinates have unequal degrees, e.g.
    the bicubic patch (weights ``(1, 1, 2)``, bound 18: 715 monomials).
    """
    n = len(weights)
    variables = tuple(variables) if variables else default_variables(n)
    mons = [m for m in _monomials_upto(n, bound)
            if sum(w * e for w, e in zip(weights, m)) <= bound]
    return MonomialSupport(variables, tuple(mons), f"weighted({list(weights)},{bound})")


def support_from_polys(polys: Sequence[MultiPoly]) -> MonomialSupport:
    """Union of the monomials of the given polynomials."""
    variables = polys[0].variables
    mons = set()
    for p in polys:
        mons.update(p.with_variables(variables).terms)
    return MonomialSupport(variables, tuple(mons), "user")


def parse_support(text: str, variables: Sequence[str] | None = None) -> MonomialSupport:
    """One monomial per line as space-separated exponents; ``#`` starts a comment."""
    mons = []
    width = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            m = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise ParseError(f"non-integer exponent in {line!r}", line=lineno) from None
        if any(e < 0 for e in m):
            raise ParseError("negative exponent", line=lineno)
        if width is None:
            width = len(m)
        elif len(m) != width:
            raise ParseError(f"expected {width} exponents, got {len(m)}", line=lineno)
        if m in mons:
            raise ParseError(f"duplicate monomial {m}", line=lineno)
        mons.append(m)
    if not mons:
        raise ParseError("empty support file")
    variables = tuple(variables) if variables else default_variables(width)
    if len(variables) != width:
        raise ParseError(f"support has {width} exponents per line but {len(variables)} variables")
    return MonomialSupport(variables, tuple(mons), "user")


def read_support(path, variables=None) -> MonomialSupport:
    return parse_support(Path(path).read_text(), variables)


def resultant_degree_bound(model) -> int:
    """Bezout-type bound ``(d+1) * delta**d`` on the total degree of the
    resultant of the ``d+1`` substituted hyperplanes."""
    d = model.d
    delta = model.degree()
    if d < 1:
        raise ValueError("parameter dimension must be at least 1")
    return (d + 1) * delta**d
