"""Randomized Chow-form implicitization for varieties of codimension > 1.

Hyperplanes through a generic point ``xi``, apex points ``G`` and random
points ``P_i`` are pulled back through the parameterization; eliminating the
parameters gives a hypersurface in ``xi`` that contains the variety.  For
space curves each such hypersurface is the cone with vertex ``G`` over the
curve (after removing an extraneous power of the plane ``E_L``), and three
cones with non-collinear apexes cut out the curve.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import (DegenerateHyperplane, IdenticallyZeroResultant, InputError,
                     ModeError, NotDivisible, RetryExhausted)
from .interp import ParamModel, fresh_samples, implicitize, sample_params
from .polycore import linalg
from .polycore.bivariate import interval_eval
from .polycore.poly import MultiPoly
from .polycore.resultant import resultant, strip_linear_power
from .polycore.roots import isolate_real_roots
from .polycore.scalar import EXACT
from .polycore.unipoly import UniPoly, uni_gcd
from .supports import resultant_degree_bound, simplex_support

DEFAULT_BOX = 10
MAX_REJECTIONS = 1000
RUN_BUDGET = 50

CONTAINS = "contains-V"
DEFINES = "defines-V-set-theoretically"


def homogenize_point(p) -> tuple:
    return (Fraction(1),) + tuple(Fraction(v) for v in p)


@dataclass(frozen=True)
class PointConfig:
    """Apex points ``G`` and point sets ``P_i``, all homogeneous ``(w, x)``.

    A ``G`` with ``w = 0`` is a point at infinity (a direction), which turns
    the cone into a cylinder.
    """

    G: Tuple[tuple, ...]
    P: Tuple[Tuple[tuple, ...], ...]
    rng_seed: int = 0
    box: int = DEFAULT_BOX

    def affine_apexes(self):
        return [tuple(v / g[0] for v in g[1:]) if g[0] != 0 else None for g in self.G]


@dataclass
class ConicalSurface:
    poly: MultiPoly
    apex: tuple
    extraneous: MultiPoly
    exponent: int
    resultant_degree: int
    config: PointConfig


@dataclass
class ImplicitSystem:
    polynomials: List[MultiPoly]
    provenance: list
    claimed_property: str = CONTAINS
    surfaces: List[ConicalSurface] = field(default_factory=list)


# -- configurations ----------------------------------------------------------

def _rank(points) -> int:
    return linalg.rank([list(p) for p in points]) if points else 0


def _on_curve(model: ParamModel, x) -> bool:
    """Exact test whether the affine point ``x`` is the image of some
    (complex) parameter, for rational curves."""
    var = model.params[0]
    g = None
    for num, den, xi in zip(model.numerators, model.denominators, x):
        u = UniPoly.from_multipoly(num - den * Fraction(xi), var)
        if not u:
            continue
        g = u if g is None else uni_gcd(g, u)
        if g.degree() == 0:
            return False
    if g is None:
        return True
    # a common root that is a pole of some coordinate is not a curve point
    for den in model.denominators:
        ud = UniPoly.from_multipoly(den, var)
        while g.degree() > 0:
            h = uni_gcd(g, ud)
            if h.degree() <= 0:
                break
            g = g // h
    return g.degree() > 0


def point_on_variety(model: ParamModel, x) -> Optional[bool]:
    """Exact membership when decidable here: curves via a gcd test, other
    models via their known equations.  ``None`` when undecided."""
    if model.d == 1 and model.mode == EXACT:
        return _on_curve(model, x)
    if model.known_equations:
        return all(q.evaluate(x) == 0 for q in model.known_equations)
    return None


def _draw_point(rng, n, box):
    return tuple(Fraction(rng.randint(-box, box)) for _ in range(n))


def _valid_config(model, G, P) -> bool:
    d = model.d
    for g in G:
        if g[0] != 0 and point_on_variety(model, g[1:]):
            return False
    for Pi in P:
        pts = list(G) + list(Pi)
        if _rank(pts) < len(pts):
            return False
    if d == 1:
        pts = list(G) + [q for Pi in P for q in Pi]
        if _rank(pts) < len(pts):
            return False
    return True


def make_config(model: ParamModel, rng_seed: int = 0, box: int = DEFAULT_BOX,
                apexes: Optional[Sequence[tuple]] = None) -> PointConfig:
    """Random integer points in ``[-box, box]^n`` satisfying the genericity
    conditions; ``apexes`` fixes ``G`` (homogeneous, ``w = 0`` for a
    direction)."""
    n, d = model.n, model.d
    if model.mode != EXACT:
        raise ModeError("Chow-form implicitization runs in exact mode")
    if d > n - 2:
        raise InputError("needs codimension at least 2")
    rng = random.Random(rng_seed)
    fixed = None
    if apexes is not None:
        fixed = tuple(tuple(Fraction(v) for v in g) for g in apexes)
        if len(fixed) != n - d - 1 or any(len(g) != n + 1 for g in fixed):
            raise InputError(f"need {n - d - 1} homogeneous apexes of length {n + 1}")
    for _ in range(MAX_REJECTIONS):
        G = fixed or tuple(homogenize_point(_draw_point(rng, n, box)) for _ in range(n - d - 1))
        P = tuple(tuple(homogenize_point(_draw_point(rng, n, box)) for _ in range(d))
                  for _ in range(d + 1))
        if _valid_config(model, G, P):
            return PointConfig(G, P, rng_seed, box)
    raise RetryExhausted(f"no generic point configuration after {MAX_REJECTIONS} draws")


# -- hyperplanes and cones ---------------------------------------------------

def _apex(config: PointConfig):
    return config.G[0] if len(config.G) == 1 else config.G


def _cofactors(rows):
    """Coefficients ``c`` with ``det [x; rows] = sum c_j x_j``."""
    m = len(rows) + 1
    out = []
    for j in range(m):
        minor = [[r[k] for k in range(m) if k != j] for r in rows]
        c = linalg.det(minor) if minor else Fraction(1)
        out.append(c if j % 2 == 0 else -c)
    return out


def _xi_hat(model):
    one = MultiPoly.constant(1, model.variables, EXACT)
    return [one] + list(MultiPoly.gens(model.variables, EXACT))


def hyperplane_through(model: ParamModel, points) -> MultiPoly:
    """Linear form in ``xi`` vanishing when ``xi`` lies on the hyperplane
    through the ``n`` homogeneous ``points``."""
    coeffs = _cofactors([list(p) for p in points])
    out = MultiPoly.zero(model.variables, EXACT)
    for c, v in zip(coeffs, _xi_hat(model)):
        if c:
            out = out + v * c
    return out


def build_hyperplanes(config: PointConfig, model: ParamModel) -> List[MultiPoly]:
    """``H_i(xi; t)`` for ``i = 0..d``, in the ring over ``t`` and ``xi``.

    ``H_i(x) = det [x; (1, xi); G; P_i]`` with ``x = (D(t), N_1(t), ...)``,
    each ``t``-coefficient affine-linear in ``xi``.

    For curves a factor of ``t`` shared by all ``xi``-coefficients is divided
    out.  It appears when a hyperplane family misses some coordinate, e.g.
    for an apex at infinity, and would otherwise make every resultant vanish.
    """
    n = model.n
    ring = tuple(model.params) + tuple(model.variables)
    D, nums = model.homogenized()
    coords = [q.with_variables(ring) for q in [D] + list(nums)]
    xi = [v.with_variables(ring) for v in _xi_hat(model)]
    out = []
    for Pi in config.P:
        rows = [list(g) for g in config.G] + [list(p) for p in Pi]
        # det is linear in the xi row: expand over its homogeneous basis
        lins = []
        for k in range(n + 1):
            e = [Fraction(int(i == k)) for i in range(n + 1)]
            cof = _cofactors([e] + rows)
            lin = MultiPoly.zero(ring, EXACT)
            for c, x in zip(cof, coords):
                if c:
                    lin = lin + x * c
            lins.append(lin)
        if model.d == 1:
            lins = _remove_common_factor(lins, model.params[0], ring)
        H = MultiPoly.zero(ring, EXACT)
        for v, lin in zip(xi, lins):
            H = H + v * lin
        if not H:
            raise DegenerateHyperplane("hyperplane determinant vanishes identically")
        out.append(H)
    return out


def _remove_common_factor(lins, var, ring):
    nonzero = [UniPoly.from_multipoly(q.with_variables((var,)), var) for q in lins if q]
    if not nonzero:
        return lins
    g = nonzero[0]
    for u in nonzero[1:]:
        g = uni_gcd(g, u)
    if g.degree() <= 0:
        return lins
    gm = g.to_multipoly(ring)
    return [q.exact_div(gm) if q else q for q in lins]


def extraneous_plane(config: PointConfig, model: ParamModel) -> MultiPoly:
    """``E_L``: the hyperplane through ``G`` and all points of ``P``."""
    pts = list(config.G) + [p for Pi in config.P for p in Pi]
    lin = hyperplane_through(model, pts)
    if lin.total_degree() != 1:
        raise DegenerateHyperplane("G and P do not span a hyperplane")
    return lin


def chow_resultant(model: ParamModel, config: PointConfig):
    """``(R, E_L, H)`` for a curve: ``R = Res_t(H_0, H_1)``."""
    if model.d != 1:
        raise InputError("the resultant path handles curves only")
    H = build_hyperplanes(config, model)
    R = resultant(H[0], H[1], model.params[0])
    if not R:
        raise IdenticallyZeroResultant("resultant vanishes identically; resample the points")
    R = R.with_variables(model.variables)
    return R, extraneous_plane(config, model), H


def conical_surface(model: ParamModel, config: PointConfig) -> ConicalSurface:
    """Cone over the curve with vertex ``G``: ``Res(H_0, H_1) / E_L^k`` with
    the largest ``k <= delta``, content-normalized."""
    R, EL, _ = chow_resultant(model, config)
    delta = model.degree()
    q, k = strip_linear_power(R, EL, delta)
    if k == 0:
        raise NotDivisible("resultant is not divisible by the extraneous plane")
    return ConicalSurface(q.primitive(), _apex(config),
                          EL, k, R.total_degree(), config)


# -- systems -----------------------------------------------------------------

def _subseeds(rng_seed):
    rng = random.Random(rng_seed)
    while True:
        yield rng.randrange(2**31)


def curve_plane(model: ParamModel, rng_seed: int = 0) -> Optional[MultiPoly]:
    """The plane containing a planar space curve, else ``None``."""
    pts = [homogenize_point(model.evaluate(t)) for t in sample_params(model, 8, rng_seed)]
    if _rank(pts) > 3:
        return None
    rows = linalg.nullspace([list(p) for p in pts], 4)
    c = rows[0]
    return MultiPoly(model.variables, {(0, 0, 0): c[0], (1, 0, 0): c[1], (0, 1, 0): c[2],
                                       (0, 0, 1): c[3]}, EXACT)


def _collinear(a, b, c) -> bool:
    return _rank([list(a), list(b), list(c)]) < 3


def _vanishes(polys, model, count, rng_seed):
    for tau in fresh_samples(model, count, rng_seed):
        pt = model.evaluate(tau)
        if any(p.evaluate(pt) != 0 for p in polys):
            return False
    return True


def space_curve_system(model: ParamModel, rng_seed: int = 0, box: int = DEFAULT_BOX,
                       count: int = 3) -> ImplicitSystem:
    """Three cones with pairwise distinct, non-collinear apexes."""
    if model.d != 1 or model.n != 3:
        raise InputError("space_curve_system needs a curve in 3-space")
    delta = model.degree()
    plane = curve_plane(model, rng_seed)
    surfaces: List[ConicalSurface] = []
    seeds = _subseeds(rng_seed)
    for _ in range(RUN_BUDGET):
        if len(surfaces) == count:
            break
        seed = next(seeds)
        cfg = make_config(model, seed, box)
        g = cfg.G[0]
        if plane is not None and plane.evaluate(g[1:]) == 0:
            continue
        prev = [s.config.G[0] for s in surfaces]
        if any(_rank([list(g), list(p)]) < 2 for p in prev):
            continue
        if len(prev) == 2 and _collinear(prev[0], prev[1], g):
            continue
        try:
            cone = conical_surface(model, cfg)
        except (IdenticallyZeroResultant, NotDivisible, DegenerateHyperplane):
            continue
        if cone.poly.total_degree() != delta or not _vanishes([cone.poly], model, 20, seed):
            continue
        surfaces.append(cone)
    if len(surfaces) < count:
        raise RetryExhausted("could not build enough generic cones")
    return ImplicitSystem([s.poly for s in surfaces], [s.config for s in surfaces],
                          DEFINES if count >= 3 else CONTAINS, surfaces)


def general_codim_implicitize(model: ParamModel, rng_seed: int = 0, runs: int = 3,
                              path: str = "resultant", delta: Optional[int] = None,
                              box: int = DEFAULT_BOX) -> ImplicitSystem:
    """Hypersurfaces containing ``V``.

    The resultant path (curves) strips the largest power of ``E_L`` found by
    exact division; the interpolation path builds the kernel of an
    interpolation matrix over ``simplex_support(n, delta)`` and keeps the
    minimal-degree elements.  Surfaces and higher always use interpolation.
    """
    if path not in ("resultant", "interp"):
        raise InputError(f"unknown path {path!r}")
    if model.n - model.d < 2:
        raise InputError("needs codimension at least 2")
    if path == "interp" or model.d > 1:
        deg = delta if delta is not None else resultant_degree_bound(model)
        support = simplex_support(model.n, deg, model.variables)
        res = implicitize(model, support, rng_seed)
        prov = [{"path": "interp", "delta": deg, "kernel_dim": res.kernel_dim,
                 "degree": p.total_degree()} for p in res.selection.small]
        return ImplicitSystem(list(res.selection.small), prov, CONTAINS)

    delta_t = model.degree()
    polys, prov = [], []
    seeds = _subseeds(rng_seed)
    for _ in range(RUN_BUDGET):
        if len(polys) == runs:
            break
        seed = next(seeds)
        cfg = make_config(model, seed, box)
        try:
            R, EL, _ = chow_resultant(model, cfg)
        except (IdenticallyZeroResultant, DegenerateHyperplane):
            continue
        q, k = strip_linear_power(R, EL, delta_t)
        q = q.primitive()
        if not _vanishes([q], model, 20, seed):
            continue
        polys.append(q)
        prov.append({"path": "resultant", "config": cfg, "resultant_degree": R.total_degree(),
                     "extraneous": EL, "exponent": k, "degree": q.total_degree()})
    if len(polys) < runs:
        raise RetryExhausted("could not complete the requested resultant runs")
    surfaces = []
    if all(e["exponent"] == delta_t and e["degree"] == delta_t for e in prov):
        surfaces = [ConicalSurface(q, _apex(e["config"]), e["extraneous"], e["exponent"],
                                   e["resultant_degree"], e["config"])
                    for q, e in zip(polys, prov)]
    return ImplicitSystem(polys, prov, CONTAINS, surfaces)


# -- verification ------------------------------------------------------------

def _random_ambient(rng, n, box=20):
    return tuple(Fraction(rng.randint(-box * 50, box * 50), rng.randint(1, 50)) for _ in range(n))


def _certified_nonzero(p: MultiPoly, box) -> bool:
    lo, hi = interval_eval(p, box)
    return lo > 0 or hi < 0


def _ruling_witness(system: ImplicitSystem, model: ParamModel, samples):
    """Points on a cone's rulings that lie on another polynomial of the
    system but not on the curve; returns one that no polynomial provably
    rejects."""
    if len(system.polynomials) < 2:
        return None, 0
    lam = MultiPoly.var("l", ("l",), EXACT)
    checked = 0
    for k, cone in enumerate(system.surfaces):
        if cone.config.G[0][0] == 0:
            continue
        G = cone.config.G[0][1:]
        others = [p for j, p in enumerate(system.polynomials) if j != k]
        for pt in samples:
            line = [MultiPoly.constant(g, ("l",), EXACT) + lam * (q - g) for g, q in zip(G, pt)]
            for other in others:
                u = UniPoly.from_multipoly(other.compose(line), "l")
                if not u or u.degree() <= 0:
                    continue
                for r in isolate_real_roots(u, eps=Fraction(1, 2**80)):
                    if r.contains(Fraction(1)) or r.contains(Fraction(0)):
                        continue
                    box = tuple((min(g + r.lo * (q - g), g + r.hi * (q - g)),
                                 max(g + r.lo * (q - g), g + r.hi * (q - g)))
                                for g, q in zip(G, pt))
                    if model.known_equations and not any(
                            _certified_nonzero(e, box) for e in model.known_equations):
                        continue  # residual point may lie on the curve itself
                    checked += 1
                    if not any(_certified_nonzero(p, box) for p in system.polynomials):
                        return [float(v[0] + v[1]) / 2 for v in box], checked
    return None, checked


def verify_system(system: ImplicitSystem, model: ParamModel, rng_seed: int = 0,
                  on_count: int = 100, off_count: int = 100, cone_pairs: int = 20) -> dict:
    """A-posteriori checks; failures are reported with witnesses, never raised.

    ``on_curve``: exact vanishing at fresh samples.  ``off_curve``: random
    ambient points off ``V`` (and, for cone systems, residual points where
    rulings of one cone meet another) each violate some polynomial.
    ``cone``: each cone vanishes along rulings through its apex.
    """
    rng = random.Random(rng_seed ^ 0x5EED)
    polys = system.polynomials
    report = {}

    samples = [model.evaluate(t) for t in fresh_samples(model, on_count, rng_seed + 101)]
    bad = next((pt for pt in samples for p in polys if p.evaluate(pt) != 0), None)
    report["on_curve"] = {"passed": bad is None, "count": len(samples),
                          "witness": None if bad is None else [str(v) for v in bad]}

    witness, probes = None, 0
    while probes < off_count:
        x = _random_ambient(rng, model.n)
        if point_on_variety(model, x):
            continue
        probes += 1
        if not any(p.evaluate(x) != 0 for p in polys):
            witness = [str(v) for v in x]
            break
    ruling_checked = 0
    if witness is None and system.surfaces:
        witness, ruling_checked = _ruling_witness(system, model, samples[:10])
    report["off_curve"] = {"passed": witness is None and bool(polys), "count": probes,
                           "ruling_points": ruling_checked, "witness": witness}

    cone_ok, cone_witness, pairs = True, None, 0
    for s in system.surfaces:
        g = s.config.G[0]
        for pt in samples[:cone_pairs]:
            lam = Fraction(rng.randint(-20, 20), rng.randint(1, 20))
            if g[0] == 0:
                probe = tuple(q + lam * v for q, v in zip(pt, g[1:]))
            else:
                probe = tuple(a + lam * (q - a) for a, q in zip(g[1:], pt))
            pairs += 1
            if s.poly.evaluate(probe) != 0:
                cone_ok, cone_witness = False, [str(v) for v in probe]
                break
    report["cone"] = {"passed": cone_ok, "pairs": pairs, "witness": cone_witness,
                      "applicable": bool(system.surfaces)}
    report["passed"] = all(r["passed"] for r in report.values())
    return report
