"""Interpolation matrices: construction, kernels, implicit equations,
membership by rank."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InputError, ParseError, RankDeficient, SamplingFailed
from .polycore import linalg
from .polycore.parse import parse_poly
from .polycore.poly import MultiPoly, grlex_key
from .polycore.scalar import EXACT, FLOAT, FLOAT_ZERO_TOL, check_mode, coerce
from .polycore.unipoly import UniPoly, uni_gcd
from .supports import MonomialSupport, default_variables

SAMPLE_BOUND = 1000
MAX_RETRIES = 1000
FLOAT_DEN_TOL = 1e-6


@dataclass(frozen=True)
class ParamModel:
    """Rational parameterization ``x_i = num_i(t) / den_i(t)``."""

    params: Tuple[str, ...]
    numerators: Tuple[MultiPoly, ...]
    denominators: Tuple[MultiPoly, ...]
    mode: str = EXACT
    variables: Tuple[str, ...] = ()
    name: str = ""
    known_equations: Tuple[MultiPoly, ...] = ()

    def __post_init__(self):
        check_mode(self.mode)
        object.__setattr__(self, "params", tuple(self.params))
        nums = tuple(p.with_variables(self.params) for p in self.numerators)
        dens = tuple(p.with_variables(self.params) for p in self.denominators)
        if len(nums) != len(dens):
            raise InputError("need one denominator per coordinate")
        if any(not q for q in dens):
            raise InputError("a denominator is identically zero")
        if any(p.mode != self.mode for p in nums + dens):
            raise InputError("coordinate polynomials must match the model mode")
        object.__setattr__(self, "numerators", nums)
        object.__setattr__(self, "denominators", dens)
        if not self.variables:
            object.__setattr__(self, "variables", default_variables(len(nums)))
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(self.variables) != len(nums):
            raise InputError("ambient variable count does not match coordinates")
        if not 1 <= self.d <= self.n - 1:
            raise InputError(f"parameter dimension {self.d} must lie in 1..{self.n - 1}")
        object.__setattr__(self, "known_equations",
                           tuple(p.with_variables(self.variables) for p in self.known_equations))

    @classmethod
    def from_strings(cls, coords: Sequence, params=("t1",), mode=EXACT, name="",
                     known=(), variables=None):
        """Coordinates as ``"num"`` or ``("num", "den")`` strings."""
        params = tuple(params)
        nums, dens = [], []
        for c in coords:
            num, den = (c, "1") if isinstance(c, str) else c
            nums.append(parse_poly(num, params, mode))
            dens.append(parse_poly(den, params, mode))
        variables = tuple(variables) if variables else default_variables(len(nums))
        known = tuple(parse_poly(k, variables, mode) for k in known)
        return cls(params, tuple(nums), tuple(dens), mode, variables, name, known)

    @property
    def d(self):
        return len(self.params)

    @property
    def n(self):
        return len(self.numerators)

    def evaluate(self, tau) -> tuple:
        """Point ``f(tau)``; raises ``ZeroDivisionError`` at a pole."""
        tau = [coerce(v, self.mode) for v in tau]
        out = []
        for num, den in zip(self.numerators, self.denominators):
            dv = den.evaluate(tau)
            if dv == 0:
                raise ZeroDivisionError("parameter value is a pole")
            out.append(num.evaluate(tau) / dv)
        return tuple(out)

    def homogenized(self):
        """``(D, [N_1..N_n])`` with ``f_i = N_i / D`` over a common denominator.

        For curves ``D`` is the lcm of the denominators, so the homogeneous
        parameterization has no spurious common factor.
        """
        dens = self.denominators
        if self.d == 1 and self.mode == EXACT:
            var = self.params[0]
            lcm = UniPoly.from_multipoly(dens[0], var).monic()
            for q in dens[1:]:
                uq = UniPoly.from_multipoly(q, var)
                lcm = (lcm * uq) // uni_gcd(lcm, uq)
            common = lcm.monic().to_multipoly(self.params)
        else:
            distinct: List[MultiPoly] = []
            for q in dens:
                qm = q.monic()
                if qm not in distinct and not qm.is_constant():
                    distinct.append(qm)
            common = reduce(lambda a, b: a * b, distinct,
                            MultiPoly.constant(1, self.params, self.mode))
        nums = []
        for num, den in zip(self.numerators, dens):
            if self.mode == EXACT:
                nums.append(num * common.exact_div(den))
            else:
                nums.append(num * (common / den))
        return common, nums

    def degree(self) -> int:
        """``delta``: maximal degree of the homogenized coordinate polynomials."""
        common, nums = self.homogenized()
        return max(p.total_degree() for p in [common] + nums)

    def to_mode(self, mode):
        return ParamModel(self.params, tuple(p.to_mode(mode) for p in self.numerators),
                          tuple(p.to_mode(mode) for p in self.denominators), mode,
                          self.variables, self.name,
                          tuple(p.to_mode(mode) for p in self.known_equations))


@dataclass(frozen=True)
class PointCloud:
    points: Tuple[tuple, ...]
    mode: str = EXACT

    def __post_init__(self):
        pts = tuple(tuple(coerce(v, self.mode) for v in p) for p in self.points)
        if not pts:
            raise InputError("empty point cloud")
        if len({len(p) for p in pts}) != 1:
            raise InputError("points have different dimensions")
        object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return len(self.points[0])

    @classmethod
    def from_csv(cls, text: str, mode=EXACT):
        """One point per line, comma separated; ``p/q`` rationals, or decimals
        in float mode."""
        pts = []
        width = None
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            row = []
            for tok in line.split(","):
                tok = tok.strip()
                try:
                    if mode == EXACT:
                        if any(ch in tok for ch in ".eE"):
                            raise ParseError(f"decimal {tok!r} not allowed in exact mode",
                                             line=lineno)
                        row.append(Fraction(tok))
                    else:
                        row.append(float(Fraction(tok)) if "/" in tok else float(tok))
                except (ValueError, ZeroDivisionError):
                    raise ParseError(f"bad number {tok!r}", line=lineno) from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(f"expected {width} coordinates, got {len(row)}", line=lineno)
            pts.append(tuple(row))
        return cls(tuple(pts), mode)


@dataclass(frozen=True)
class InterpMatrix:
    """Monomials of ``support`` evaluated at samples: entry ``(k, i) = m_i(tau_k)``."""

    support: MonomialSupport
    rows: Tuple[tuple, ...]
    samples: Tuple[tuple, ...]
    mode: str = EXACT

    @property
    def shape(self):
        return (len(self.rows), len(self.support))

    def to_numpy(self):
        return np.array([[float(v) for v in r] for r in self.rows], dtype=float)


# -- sampling ----------------------------------------------------------------

def _draw(rng, mode, bound):
    if mode == EXACT:
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    return rng.uniform(-1.0, 1.0)


def _sample_ok(model, tau):
    for den in model.denominators:
        v = den.evaluate(tau)
        if model.mode == EXACT:
            if v == 0:
                return False
        elif abs(v) < FLOAT_DEN_TOL:
            return False
    return True


def sample_params(model: ParamModel, count: int, rng_seed: int = 0,
                  bound: int = SAMPLE_BOUND, max_retries: int = MAX_RETRIES,
                  exclude=()) -> List[tuple]:
    """``count`` distinct parameter points avoiding the poles of the model.

    Exact mode draws rationals ``p/q`` with ``|p|, q <= bound``; float mode
    draws uniformly from ``[-1, 1]`` and rejects ``|denominator| < 1e-6``.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if bound < 1:
        raise ValueError("sample bound must be positive")
    rng = random.Random(rng_seed)
    seen = set(tuple(t) for t in exclude)
    out = []
    for _ in range(count):
        for _attempt in range(max_retries):
            tau = tuple(_draw(rng, model.mode, bound) for _ in range(model.d))
            if tau in seen or not _sample_ok(model, tau):
                continue
            seen.add(tau)
            out.append(tau)
            break
        else:
            raise SamplingFailed(f"no admissible sample after {max_retries} draws")
    return out


# -- matrices ----------------------------------------------------------------

def _clear_row(row):
    """Scale an exact row to coprime integers (the kernel is unchanged)."""
    den = reduce(math.lcm, (v.denominator for v in row), 1)
    ints = [v.numerator * (den // v.denominator) for v in row]
    g = reduce(math.gcd, ints, 0)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(Fraction(v) for v in ints)


def default_mu(support, mode):
    return len(support) if mode == EXACT else 2 * len(support)


def build_matrix(source: Union[ParamModel, PointCloud], support: MonomialSupport,
                 mu: Optional[int] = None, rng_seed: int = 0,
                 samples: Optional[Sequence] = None) -> InterpMatrix:
    """Evaluate the support at ``mu`` samples (or cloud points), one per row."""
    mode = source.mode
    if isinstance(source, ParamModel):
        if source.n != support.n:
            raise InputError("support and model have different ambient dimensions")
        if samples is None:
            mu = mu if mu is not None else default_mu(support, mode)
            samples = sample_params(source, mu, rng_seed) if mu > 0 else []
        points = [source.evaluate(t) for t in samples]
    else:
        if source.n != support.n:
            raise InputError("support and cloud have different dimensions")
        mu = mu if mu is not None else min(len(source.points), default_mu(support, mode))
        if mu > len(source.points):
            raise InputError(f"cloud has {len(source.points)} points, {mu} requested")
        points = list(source.points[:mu])
        samples = points
    rows = []
    for pt in points:
        row = support.evaluate(pt)
        rows.append(_clear_row(row) if mode == EXACT else tuple(float(v) for v in row))
    return InterpMatrix(support, tuple(rows), tuple(tuple(s) for s in samples), mode)


def kernel(m: InterpMatrix, tol: float = FLOAT_ZERO_TOL) -> List[Tuple[list, MultiPoly]]:
    """Kernel basis as ``(vector, polynomial)`` pairs.

    Exact mode gives the pivot-normalized reduced-echelon basis over
    graded-lex ordered columns: one vector per free column, whose highest
    monomial is that column.  Float mode gives right singular vectors with
    singular value below ``tol * sigma_max``.
    """
    ncols = len(m.support)
    if m.mode == EXACT:
        vecs = linalg.nullspace(list(m.rows), ncols)
    else:
        a = m.to_numpy() if m.rows else np.zeros((0, ncols))
        vecs = [list(v) for v in linalg.float_nullspace(a, tol)] if m.rows else \
            [[float(i == j) for i in range(ncols)] for j in range(ncols)]
    return [(v, _vec_poly(m.support, v, m.mode)) for v in vecs]


def _vec_poly(support, v, mode):
    if mode == FLOAT:
        big = max((abs(x) for x in v), default=0.0)
        v = [x if abs(x) > 1e-12 * big else 0.0 for x in v]
    return support.poly_from_vector(v, mode)


def implicit_from_det(m: InterpMatrix, tol: float = FLOAT_ZERO_TOL) -> MultiPoly:
    """``det [M'; S(x)]`` for the ``(|S|-1) x |S|`` matrix ``M'``.

    The cofactor expansion along the symbolic row spans the one-dimensional
    kernel of ``M'``; the result is scaled to graded-lex leading coefficient 1.
    """
    rows, cols = m.shape
    if rows != cols - 1:
        raise ValueError(f"expected a {cols - 1} x {cols} matrix, got {rows} x {cols}")
    ker = kernel(m, tol)
    if m.mode == FLOAT and rows:
        r = linalg.float_svd_rank(m.to_numpy(), tol)
        if r < rows:
            raise RankDeficient(f"M' has rank {r} < {rows}")
    if len(ker) != 1:
        raise RankDeficient(f"M' has corank {len(ker)}; use kernel() instead")
    return ker[0][1].monic()


def bordered_det(m: InterpMatrix, x) -> Fraction:
    """Exact ``det M(x)`` with the monomial row evaluated at ``x``."""
    return linalg.det(list(m.rows) + [m.support.evaluate([coerce(v, EXACT) for v in x])])


def membership(m: InterpMatrix, q, tol: float = FLOAT_ZERO_TOL):
    """Exact mode: ``rank [M'; S(q)] == rank M'``.

    Float mode returns a score instead: with ``r`` the numerical rank of the
    (row-normalized) ``M'``, the ``(r+1)``-th singular value of the appended
    matrix relative to the largest.  It is near zero exactly when the extra
    row does not raise the rank.
    """
    if m.mode == EXACT:
        row = tuple(m.support.evaluate([coerce(v, EXACT) for v in q]))
        return linalg.rank(list(m.rows) + [row]) == linalg.rank(list(m.rows))
    base = m.to_numpy()
    a = np.vstack([base, np.array([m.support.evaluate([float(v) for v in q])])])
    a = a / np.maximum(np.linalg.norm(a, axis=1, keepdims=True), 1e-300)
    r = linalg.float_svd_rank(a[:-1], tol)
    s = np.linalg.svd(a, compute_uv=False)
    return float(s[r] / s[0]) if r < len(s) else 0.0


# -- kernel selection --------------------------------------------------------

@dataclass
class KernelSelection:
    small: List[MultiPoly]
    reduced: List[MultiPoly]
    criterion: str
    values: List[int] = field(default_factory=list)


def _as_vectors(basis):
    return [list(b[0]) if isinstance(b, tuple) else list(b) for b in basis]


def _float_rref(a, cols, tol):
    a = np.array(a, dtype=float)
    pivots = []
    r = 0
    for c in cols:
        if r == a.shape[0]:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) <= tol * max(1.0, np.abs(a).max()):
            continue
        a[[r, p]] = a[[p, r]]
        a[r] /= a[r, c]
        for i in range(a.shape[0]):
            if i != r:
                a[i] -= a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def select_small_kernel_polys(basis, support: MonomialSupport, criterion: str = "degree",
                              mode: str = EXACT, tol: float = FLOAT_ZERO_TOL) -> KernelSelection:
    """Echelon-reduce the kernel so highest monomials are eliminated first,
    then keep the basis elements with the smallest criterion value.

    ``criterion`` is ``"degree"`` (total degree of the leading monomial) or
    ``"terms"`` (number of non-zero coefficients).
    """
    if criterion not in ("degree", "terms"):
        raise ValueError(f"unknown criterion {criterion!r}")
    vecs = _as_vectors(basis)
    if not vecs:
        return KernelSelection([], [], criterion, [])
    order = sorted(range(len(support)), key=lambda i: grlex_key(support.monomials[i]),
                   reverse=True)
    if mode == EXACT:
        red, pivots = linalg.rref(vecs, order)
    else:
        red, pivots = _float_rref(vecs, order, tol)
        red = [list(r) for r in red]
    polys, values = [], []
    for row, pc in zip(red, pivots):
        p = _vec_poly(support, row, mode)
        p = p.primitive() if mode == EXACT else p.monic()
        polys.append(p)
        if criterion == "degree":
            values.append(sum(support.monomials[pc]))
        else:
            values.append(len(p.terms))
    best = min(values)
    small = [p for p, v in zip(polys, values) if v == best]
    return KernelSelection(small, polys, criterion, values)


# -- a-posteriori checks -----------------------------------------------------

def fresh_samples(model: ParamModel, count: int, rng_seed: int, exclude=()):
    return sample_params(model, count, rng_seed + 7919, exclude=exclude)


def vanishes_on_samples(polys, model: ParamModel, count=20, rng_seed=0, exclude=(),
                        tol: float = 1e-6) -> bool:
    """Every polynomial is zero (exactly, or within ``tol`` relative in float
    mode) at ``count`` parameter samples not in ``exclude``."""
    for tau in fresh_samples(model, count, rng_seed, exclude):
        pt = model.evaluate(tau)
        for p in polys:
            v = p.evaluate(pt)
            if model.mode == EXACT:
                if v != 0:
                    return False
            else:
                scale = sum(abs(c) * abs(eval_abs(m, pt)) for m, c in p.terms.items())
                if abs(v) > tol * max(scale, 1e-300):
                    return False
    return True


def eval_abs(m, pt):
    v = 1.0
    for x, e in zip(pt, m):
        v *= abs(float(x)) ** e
    return v


@dataclass
class ImplicitizeResult:
    matrix: InterpMatrix
    kernel_dim: int
    selection: KernelSelection
    attempts: int
    validated: bool


def implicitize(source, support: MonomialSupport, rng_seed: int = 0, mu=None,
                criterion="degree", max_attempts: int = 3) -> ImplicitizeResult:
    """build_matrix -> kernel -> select_small_kernel_polys, resampling when a
    kernel polynomial fails to vanish on fresh parametric samples."""
    attempt = 0
    while True:
        m = build_matrix(source, support, mu, rng_seed + 1000 * attempt)
        ker = kernel(m)
        sel = select_small_kernel_polys(ker, support, criterion, m.mode) if ker else \
            KernelSelection([], [], criterion, [])
        attempt += 1
        if not isinstance(source, ParamModel):
            return ImplicitizeResult(m, len(ker), sel, attempt, True)
        ok = vanishes_on_samples(sel.reduced, source, 20, rng_seed, exclude=m.samples)
        if ok or attempt >= max_attempts:
            return ImplicitizeResult(m, len(ker), sel, attempt, ok)
