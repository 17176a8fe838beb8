"""Ray shooting against a surface represented by its interpolation matrix.

Preprocessing eliminates ``(M')^T`` once with partial pivoting and keeps the
last row ``w`` of ``L^-1 P^T``.  For any point ``x`` the inner product
``<w, S(x)>`` is a fixed non-zero multiple of ``det [M'; S(x)]``, so a ray
query costs one substitution into the support plus univariate solving.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .errors import (InputError, InversionFailed, NonZeroDimensional, ParseError,
                     RankDeficient, RayOnSurface, ValidationFailed)
from .interp import InterpMatrix, ParamModel, sample_params
from .polycore import linalg
from .polycore.bivariate import bivariate_solve
from .polycore.poly import MultiPoly
from .polycore.roots import RealRoot, isolate_real_roots
from .polycore.scalar import EXACT, FLOAT, coerce
from .polycore.unipoly import UniPoly
from .supports import MonomialSupport

#: condition number of M' above which preprocessing warns
CONDITION_WARN = 1e8
INVERSION_TOL = 1e-6


@dataclass(frozen=True)
class Ray:
    """``x_i = a_i * rho + b_i`` for ``rho > 0``."""

    a: Tuple
    b: Tuple
    mode: str = EXACT

    def __post_init__(self):
        a = tuple(coerce(v, self.mode) for v in self.a)
        b = tuple(coerce(v, self.mode) for v in self.b)
        if len(a) != len(b):
            raise InputError("ray direction and origin differ in length")
        if all(v == 0 for v in a):
            raise InputError("ray direction is zero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self):
        return len(self.a)

    def at(self, rho):
        return tuple(ai * rho + bi for ai, bi in zip(self.a, self.b))

    @classmethod
    def parse(cls, text: str, mode=EXACT):
        """``"a1,b1;a2,b2;a3,b3"``."""
        a, b = [], []
        for k, chunk in enumerate(text.split(";")):
            parts = [p.strip() for p in chunk.split(",")]
            if len(parts) != 2:
                raise ParseError(f"ray component {k + 1} must be 'a,b', got {chunk!r}")
            try:
                if mode == EXACT:
                    a.append(Fraction(parts[0]))
                    b.append(Fraction(parts[1]))
                else:
                    a.append(float(Fraction(parts[0])) if "/" in parts[0] else float(parts[0]))
                    b.append(float(Fraction(parts[1])) if "/" in parts[1] else float(parts[1]))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad number in ray component {chunk!r}") from None
        return cls(tuple(a), tuple(b), mode)


@dataclass(frozen=True)
class SurfacePatch:
    model: ParamModel
    box: Tuple[Tuple, ...]

    def __post_init__(self):
        box = tuple((Fraction(lo), Fraction(hi)) if self.model.mode == EXACT
                    else (float(lo), float(hi)) for lo, hi in self.box)
        if len(box) != self.model.d:
            raise InputError("patch box needs one interval per parameter")
        if any(lo > hi for lo, hi in box):
            raise InputError("empty patch interval")
        object.__setattr__(self, "box", box)

    def contains(self, t) -> bool:
        return all(lo <= v <= hi for v, (lo, hi) in zip(t, self.box))

    @classmethod
    def parse(cls, model: ParamModel, text: Optional[str]):
        """``"t1:lo,hi;t2:lo,hi"``; missing parameters are unbounded."""
        big = Fraction(10**18)
        bounds = {p: (-big, big) for p in model.params}
        if text:
            for chunk in text.split(";"):
                try:
                    name, rng = chunk.split(":")
                    lo, hi = rng.split(",")
                    bounds[name.strip()] = (Fraction(lo.strip()), Fraction(hi.strip()))
                except ValueError:
                    raise ParseError(f"bad patch interval {chunk!r}") from None
        unknown = set(bounds) - set(model.params)
        if unknown:
            raise ParseError(f"unknown patch parameters {sorted(unknown)}")
        return cls(model, tuple(bounds[p] for p in model.params))


@dataclass
class RayPreproc:
    support: MonomialSupport
    w: list
    diag_nonzero: bool
    mode: str = EXACT
    scale: object = None
    condition: Optional[float] = None
    warnings: List[str] = field(default_factory=list)

    def value(self, x):
        """``<w, S(x)>``, proportional to ``det M(x)``."""
        return sum(wi * si for wi, si in zip(self.w, self.support.evaluate(x)))


@dataclass
class HitRecord:
    rho: RealRoot
    point: tuple
    preimage: Optional[tuple]
    on_patch: bool
    multiplicity: int
    residual: Optional[float] = None

    def to_dict(self):
        exact = isinstance(self.rho.lo, Fraction)
        d = {
            "rho": float(self.rho.mid),
            "rho_interval": [str(self.rho.lo), str(self.rho.hi)] if exact
            else [float(self.rho.lo), float(self.rho.hi)],
            "point": [float(v) for v in self.point],
            "preimage": None if self.preimage is None else [float(v) for v in self.preimage],
            "on_patch": self.on_patch,
            "multiplicity": self.multiplicity,
            "residual": self.residual,
        }
        if exact and self.rho.is_exact:
            d["point_exact"] = [str(v) for v in self.point]
        return d


# -- preprocessing -----------------------------------------------------------

def _float_last_row(mt):
    """Partial-pivot elimination of ``mt`` (N x N-1) carrying the identity."""
    n = mt.shape[0]
    a = np.hstack([mt.astype(float), np.eye(n)])
    m = n - 1
    sign = 1
    diag = np.zeros(m)
    for c in range(m):
        p = c + int(np.argmax(np.abs(a[c:, c])))
        if a[p, c] == 0:
            return None, None, sign
        if p != c:
            a[[c, p]] = a[[p, c]]
            sign = -sign
        diag[c] = a[c, c]
        f = a[c + 1:, c] / a[c, c]
        a[c + 1:, c:] -= np.outer(f, a[c, c:])
    return a[n - 1, m:], diag, sign


def _random_point(rng, n, mode):
    if mode == EXACT:
        return tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(n))
    return tuple(rng.uniform(-1, 1) for _ in range(n))


def preprocess(mprime: InterpMatrix, model: Optional[ParamModel] = None, rng_seed: int = 0,
               validate: str = "auto", tol: float = 1e-6) -> RayPreproc:
    """PLU-preprocess the ``(|S|-1) x |S|`` matrix ``M'``.

    ``validate`` controls what happens when the proportionality check fails
    in float mode: ``"raise"``, ``"warn"``, or ``"auto"`` (warn only when
    the matrix has already been flagged as ill-conditioned).  Exact mode
    always raises.
    """
    if validate not in ("raise", "warn", "auto"):
        raise ValueError(f"unknown validate policy {validate!r}")
    rows, cols = mprime.shape
    if rows != cols - 1:
        raise ValueError(f"expected a {cols - 1} x {cols} matrix, got {rows} x {cols}")
    support = mprime.support
    rng = random.Random(rng_seed)
    notes: List[str] = []

    if mprime.mode == EXACT:
        mt = [list(col) for col in zip(*mprime.rows)] if rows else [[] for _ in range(cols)]
        w, diag, sign = linalg.plu_last_row(mt)
        if w is None:
            raise RankDeficient("M' is rank deficient")
        prod = Fraction(1)
        for u in diag:
            prod *= u
        scale = Fraction(sign) / prod
        pre = RayPreproc(support, w, True, EXACT, scale)
        _validate_exact(pre, mprime, model, rng)
        return pre

    a = mprime.to_numpy()
    w, diag, sign = _float_last_row(a.T)
    if w is None or not np.all(np.isfinite(w)):
        raise RankDeficient("M' is rank deficient")
    s = np.linalg.svd(a, compute_uv=False)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
    if cond > CONDITION_WARN:
        msg = f"M' is ill-conditioned (condition number {cond:.3e}); float results are unreliable"
        notes.append(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    logabs = float(np.sum(np.log(np.abs(diag))))
    sgn = sign * int(np.prod(np.sign(diag)))
    pre = RayPreproc(support, list(w), True, FLOAT, (sgn, -logabs), cond, notes)
    err = _validate_float(pre, a, model, rng, tol)
    if err:
        if validate == "raise" or (validate == "auto" and cond <= CONDITION_WARN):
            raise ValidationFailed(err)
        notes.append(err)
        warnings.warn(err, RuntimeWarning, stacklevel=2)
    return pre


def _on_surface_point(mprime, model, rng):
    if model is not None:
        tau = sample_params(model, 1, rng.randint(0, 2**31), exclude=mprime.samples)[0]
        return model.evaluate(tau)
    return None


def _validate_exact(pre, mprime, model, rng):
    on = _on_surface_point(mprime, model, rng)
    if on is not None:
        if pre.value(on) != 0:
            raise ValidationFailed("<w, S(x)> does not vanish on the surface")
    elif mprime.rows and any(
            sum(wi * ri for wi, ri in zip(pre.w, row)) != 0 for row in mprime.rows):
        raise ValidationFailed("<w, S(x)> does not vanish at the samples")
    for _ in range(20):
        x = _random_point(rng, pre.support.n, EXACT)
        d = linalg.det(list(mprime.rows) + [pre.support.evaluate(x)])
        if d != 0:
            if pre.value(x) != pre.scale * d:
                raise ValidationFailed("<w, S(x)> is not proportional to det M(x)")
            return
    raise ValidationFailed("det M(x) vanished at every probe point")


def _validate_float(pre, a, model, rng, tol):
    on = None
    if model is not None:
        try:
            tau = sample_params(model, 1, rng.randint(0, 2**31))[0]
            on = model.evaluate(tau)
        except ZeroDivisionError:
            on = None
    if on is not None:
        row = np.array(pre.support.evaluate(on), dtype=float)
        mag = float(np.sum(np.abs(np.array(pre.w) * row)))
        if abs(float(np.dot(pre.w, row))) > tol * max(mag, 1e-300):
            return "on-surface check failed: <w, S(x)> is not negligible at a surface sample"
    x = _random_point(rng, pre.support.n, FLOAT)
    row = np.array(pre.support.evaluate(x), dtype=float)
    sgn, logdet = np.linalg.slogdet(np.vstack([a, row]))
    if sgn == 0:
        return "det M(x) vanished at the probe point"
    val = float(np.dot(pre.w, row))
    s_sign, s_log = pre.scale
    pred_log = s_log + logdet
    if val == 0 or np.sign(val) != s_sign * sgn or abs(np.log(abs(val)) - pred_log) > np.log1p(tol ** 0.5):
        return "proportionality check failed: <w, S(x)> does not match det M(x)"
    return None


# -- queries -----------------------------------------------------------------

def _ray_monomials(support, ray, mode):
    lin = [UniPoly([b, a], mode, "rho") for a, b in zip(ray.a, ray.b)]
    cache = [{0: UniPoly([1], mode, "rho")} for _ in lin]

    def power(i, e):
        c = cache[i]
        if e not in c:
            c[e] = power(i, e - 1) * lin[i]
        return c[e]

    out = []
    for m in support.monomials:
        term = UniPoly([1], mode, "rho")
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        out.append(term)
    return out


def ray_poly(pre: RayPreproc, ray: Ray, tol: float = 1e-10) -> UniPoly:
    """``p(rho) = <w, S(r(rho))>``; raises :class:`RayOnSurface` if ``p == 0``."""
    if ray.mode != pre.mode:
        raise InputError("ray and preprocessing use different modes")
    if ray.n != pre.support.n:
        raise InputError("ray dimension does not match the surface")
    mons = _ray_monomials(pre.support, ray, pre.mode)
    deg = max((m.degree() for m in mons), default=0)
    acc = [0] * (deg + 1)
    mag = [0.0] * (deg + 1)
    for wi, m in zip(pre.w, mons):
        if wi == 0:
            continue
        for k, c in enumerate(m.coeffs):
            acc[k] += wi * c
            if pre.mode == FLOAT:
                mag[k] += abs(wi * c)
    if pre.mode == FLOAT:
        big = max(mag, default=0.0)
        acc = [v if abs(v) > tol * big else 0.0 for v in acc]
    p = UniPoly(acc, pre.mode, "rho")
    if not p:
        raise RayOnSurface("the ray lies on the surface: p(rho) vanishes identically")
    return p


def _inversion_equations(model, point):
    """``x_i * den_i(t) - num_i(t)`` with exact coefficients."""
    eqs = []
    for x, num, den in zip(point, model.numerators, model.denominators):
        if model.mode == FLOAT:
            num, den, x = _exactify(num), _exactify(den), Fraction(float(x))
        eqs.append(den * x - num)
    return eqs


def _exactify(p: MultiPoly):
    return MultiPoly(p.variables, {m: Fraction(c) for m, c in p.terms.items()}, EXACT)


def _solve_subset(sub, d):
    if d == 1:
        if not sub[0]:
            raise NonZeroDimensional("equation vanishes identically")
        u = UniPoly.from_multipoly(sub[0])
        if u.degree() <= 0:
            return []
        return [(r,) for r in isolate_real_roots(u)]
    if d == 2:
        return [tuple(s) for s in bivariate_solve(sub[0], sub[1])]
    raise InversionFailed(f"inversion for {d} parameters is not supported")


def _best_candidate(model, point, cands, box, tol):
    size = 1 + max(abs(float(v)) for v in point)
    exact_point = all(isinstance(v, Fraction) for v in point)
    best = None
    for cand in cands:
        t = tuple(r.mid for r in cand)
        try:
            fx = model.to_mode(EXACT).evaluate(t) if model.mode == FLOAT else model.evaluate(t)
        except ZeroDivisionError:
            continue
        if exact_point and all(r.is_exact for r in cand):
            if any(fx[i] != point[i] for i in range(len(point))):
                continue
            res = 0.0
        else:
            res = max(abs(float(fx[i]) - float(point[i])) for i in range(len(point)))
            if res > tol * size:
                continue
        inside = box is not None and all(lo <= v <= hi for v, (lo, hi) in zip(t, box))
        key = (not inside, res)
        if best is None or key < best[0]:
            best = (key, t, res, inside)
    return best


def invert(model: ParamModel, point, box=None, tol: float = INVERSION_TOL):
    """Parameter preimage of ``point``.

    Solves the square subsystem formed by the first ``d`` equations
    ``x_i * den_i(t) - num_i(t)`` and checks each real solution against all
    coordinates: exactly in exact arithmetic, else within
    ``tol * (1 + max|x_i|)``.  Other subsets of equations are tried when the
    first one is not zero-dimensional or yields no acceptable solution
    (e.g. at a fold of the projection).  Returns ``(t, residual, in_box)``,
    or ``None`` when no preimage is found.
    """
    eqs = _inversion_equations(model, point)
    d = model.d
    solved_any = False
    for idx in itertools.combinations(range(len(eqs)), d):
        try:
            cands = _solve_subset([eqs[i] for i in idx], d)
        except NonZeroDimensional:
            continue
        solved_any = True
        best = _best_candidate(model, point, cands, box, tol)
        if best is not None:
            return best[1], best[2], best[3]
    if not solved_any:
        raise InversionFailed("no zero-dimensional square subsystem")
    return None


def shoot(pre: RayPreproc, patch: SurfacePatch, ray: Ray, tol: float = INVERSION_TOL,
          strict: bool = False) -> List[HitRecord]:
    """Intersections with ``rho > 0``, sorted by ``rho``, with preimages and
    patch membership (closed box)."""
    p = ray_poly(pre, ray)
    hits = []
    for root in isolate_real_roots(p, "positive"):
        rho = root.lo if root.is_exact else root.mid
        point = ray.at(rho)
        if patch.model.mode != pre.mode:
            point = tuple(float(v) for v in point)
        try:
            found = invert(patch.model, point, patch.box, tol)
        except InversionFailed:
            if strict:
                raise
            found = None
        if found is None:
            if strict:
                raise InversionFailed(f"no parameter preimage for the hit at rho ~ {float(rho):.6g}")
            hits.append(HitRecord(root, point, None, False, root.multiplicity, None))
            continue
        t, res, inside = found
        hits.append(HitRecord(root, point, t, inside, root.multiplicity, float(res)))
    return hits
