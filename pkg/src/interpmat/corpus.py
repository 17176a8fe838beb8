"""Named regression fixtures with their reference checks."""

from __future__ import annotations

import time
import warnings
from typing import Callable, Dict, List

from . import chow, interp, rayshoot
from .errors import InputError
from .interp import ParamModel
from .polycore import linalg
from .polycore.parse import parse_poly
from .polycore.roots import isolate_real_roots
from .polycore.scalar import FLOAT
from .polycore.unipoly import UniPoly
from .supports import MonomialSupport, simplex_support, weighted_simplex_support

BICUBIC_RAY = "1,-13;1,12;-5,3"


def twisted_cubic() -> ParamModel:
    return ParamModel.from_strings(["t1", "t1^2", "t1^3"], name="twisted-cubic",
                                   known=["x1^2 - x2", "x2^2 - x1*x3", "x1*x2 - x3"])


def two_cylinders() -> ParamModel:
    return ParamModel.from_strings(
        [("1 - t1^2", "1 + t1^2"), ("2*t1", "1 + t1^2"), ("(1 - t1^2)^2", "(1 + t1^2)^2")],
        name="two-cylinders", known=["x1^2 - x3", "x2^2 + x3 - 1"])


def viviani(a: int = 2) -> ParamModel:
    """Sphere of radius ``2a`` cut by a cylinder of radius ``a`` through its centre."""
    return ParamModel.from_strings(
        [(f"{2 * a}*(1 - t1^2)^2", "(1 + t1^2)^2"), (f"{4 * a}*t1*(1 - t1^2)", "(1 + t1^2)^2"),
         (f"{4 * a}*t1", "1 + t1^2")],
        name=f"viviani-a{a}",
        known=[f"x1^2 + x2^2 + x3^2 - {(2 * a) ** 2}", f"(x1 - {a})^2 + x2^2 - {a * a}"])


def curve4d() -> ParamModel:
    return ParamModel.from_strings(
        ["t1^2 - t1 - 1", "t1^3 + 2*t1^2 - t1", "t1^2 + t1 - 1", "t1^3 - 2*t1 + 3"],
        name="curve4d")


def crossed() -> ParamModel:
    return ParamModel.from_strings(["t1", "t2", "t1^2*t2^2"], params=("t1", "t2"),
                                   name="crossed", known=["x3 - x1^2*x2^2"])


def crossed_support():
    return MonomialSupport(("x1", "x2", "x3"),
                           ((1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 2, 0), (0, 0, 1)))


def plane() -> ParamModel:
    return ParamModel.from_strings(["t1", "t2", "0"], params=("t1", "t2"), name="plane",
                                   known=["x3"])


def plane_support():
    return MonomialSupport(("x1", "x2", "x3"),
                           ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)))


def sphere() -> ParamModel:
    """Unit sphere by inverse stereographic projection."""
    q = "1 + t1^2 + t2^2"
    return ParamModel.from_strings([("2*t1", q), ("2*t2", q), ("t1^2 + t2^2 - 1", q)],
                                   params=("t1", "t2"), name="sphere",
                                   known=["x1^2 + x2^2 + x3^2 - 1"])


def moebius() -> ParamModel:
    """Moebius band with half-angle cosine ``(1-s^2)/(1+s^2)``."""
    D = "(1 + t1^2)"
    return ParamModel.from_strings(
        [(f"({D} + t2*(1 - t1^2))*(2*(1 - t1^2)^2 - {D}^2)", f"{D}^3"),
         (f"({D} + t2*(1 - t1^2))*4*t1*(1 - t1^2)", f"{D}^3"),
         ("2*t1*t2", D)],
        params=("t1", "t2"), name="moebius",
        known=["x1^2*x2 - 2*x1^2*x3 + x2^3 - 2*x2^2*x3 + x2*x3^2 - 2*x1*x3 - x2"])


def bicubic(mode=FLOAT) -> ParamModel:
    return ParamModel.from_strings(
        ["3*t1*(t1 - 1)^2 + (t2 - 1)^3 + 3*t2",
         "3*t2*(t2 - 1)^2 + t1^3 + 3*t1",
         "-3*t2*(t2^2 - 5*t2 + 5)*t1^3 - 3*(t2^3 + 6*t2^2 - 9*t2 + 1)*t1^2"
         " + t1*(6*t2^3 + 9*t2^2 - 18*t2 + 3) - 3*t2*(t2 - 1)"],
        params=("t1", "t2"), mode=mode, name="bicubic")


def bicubic_support():
    """Weighted simplex ``a + b + 2c <= 18``: 715 monomials."""
    return weighted_simplex_support((1, 1, 2), 18)


MODELS: Dict[str, Callable[[], ParamModel]] = {
    "twisted-cubic": twisted_cubic, "two-cylinders": two_cylinders, "viviani-a2": viviani,
    "curve4d": curve4d, "crossed": crossed, "plane": plane, "sphere": sphere,
    "moebius": moebius, "bicubic-float": bicubic,
}


# -- helpers -----------------------------------------------------------------

def same_span(polys, refs) -> bool:
    """Exact test that two lists of polynomials span the same vector space."""
    mons = sorted({m for p in list(polys) + list(refs) for m in p.terms})
    vec = lambda p: [p.terms.get(m, 0) for m in mons]  # noqa: E731
    a = [vec(p) for p in polys]
    b = [vec(p) for p in refs]
    ra, rb = linalg.rank(a), linalg.rank(b)
    return ra == rb == linalg.rank(a + b)


def proportional(p, q) -> bool:
    return same_span([p], [q]) and bool(p) and bool(q)


def oracle_ray_roots(known, ray: rayshoot.Ray):
    """Positive roots of the known implicit equation restricted to the ray."""
    rho = ("rho",)
    line = [parse_poly(f"({a})*rho + ({b})", rho) for a, b in zip(ray.a, ray.b)]
    u = UniPoly.from_multipoly(known.compose(line), "rho")
    if not u:
        return None
    return isolate_real_roots(u, "positive")


def _kernel_fixture(model, delta, refs, degrees):
    support = simplex_support(3, delta)
    res = interp.implicitize(model, support)
    small = res.selection.small
    refp = [parse_poly(r, model.variables) for r in refs]
    checks = {
        "matrix_shape": res.matrix.shape == (len(support), len(support)),
        "kernel_dim": res.kernel_dim == degrees[0],
        "small_degree_2": len(small) == len(refs) and all(p.total_degree() == 2 for p in small),
        "span_matches": same_span(small, refp),
        "degree_range": sorted({p.total_degree() for p in res.selection.reduced}) ==
        list(range(2, delta + 1)),
        "validated": res.validated,
    }
    details = {"kernel_dim": res.kernel_dim, "small": [str(p) for p in small]}
    return checks, details


def _cone_fixture(model, seed, degree):
    system = chow.space_curve_system(model, seed)
    rep = chow.verify_system(system, model, seed, on_count=100, off_count=100)
    checks = {
        "three_surfaces": len(system.polynomials) == 3,
        "surface_degree": all(p.total_degree() == degree for p in system.polynomials),
        "resultant_degree": all(s.resultant_degree == 2 * degree for s in system.surfaces),
        "extraneous_power": all(s.exponent == degree for s in system.surfaces),
        "verification": rep["passed"],
    }
    return checks, {"cones": [str(p) for p in system.polynomials], "verification": rep}


# -- fixtures ----------------------------------------------------------------

def _fx_twisted_cubic(seed):
    m = twisted_cubic()
    checks, details = _kernel_fixture(m, 6, ["x1^2 - x2", "x2^2 - x1*x3", "x1*x2 - x3"], (65,))
    c2, d2 = _cone_fixture(m, seed, 3)
    checks.update({f"cone_{k}": v for k, v in c2.items()})
    details.update(d2)
    return checks, details, []


def _fx_two_cylinders(seed):
    m = two_cylinders()
    checks, details = _kernel_fixture(m, 8, ["x1^2 - x3", "x2^2 + x3 - 1"], (133,))
    c2, d2 = _cone_fixture(m, seed, 4)
    checks.update({f"cone_{k}": v for k, v in c2.items()})
    details.update(d2)
    return checks, details, []


def _fx_viviani(seed):
    checks, details = _cone_fixture(viviani(2), seed, 4)
    return checks, details, []


def _fx_curve4d(seed):
    m = curve4d()
    system = chow.general_codim_implicitize(m, seed, runs=5)
    rep = chow.verify_system(system, m, seed, on_count=100, off_count=200)
    prov = system.provenance
    checks = {
        "five_runs": len(system.polynomials) == 5,
        "resultant_degree_6": all(p["resultant_degree"] == 6 for p in prov),
        "linear_factor_cubed": all(p["exponent"] == 3 for p in prov),
        "quotient_degree_3": all(p.total_degree() == 3 for p in system.polynomials),
        "verification": rep["passed"],
    }
    return checks, {"polynomials": [str(p) for p in system.polynomials],
                    "verification": rep}, []


def _fx_crossed(seed):
    m = crossed()
    support = crossed_support()
    mp = interp.build_matrix(m, support, len(support) - 1, seed)
    p = interp.implicit_from_det(mp)
    pre = rayshoot.preprocess(mp, m, seed)
    ray = rayshoot.Ray.parse("1,0;0,1;0,1")
    inside = rayshoot.shoot(pre, rayshoot.SurfacePatch.parse(m, "t1:-2,2;t2:-2,2"), ray)
    outside = rayshoot.shoot(pre, rayshoot.SurfacePatch.parse(m, "t1:2,3;t2:2,3"), ray)
    checks = {
        "implicit_equation": proportional(p, m.known_equations[0]),
        "one_hit": len(inside) == 1 and inside[0].rho.is_exact and inside[0].rho.lo == 1,
        "preimage": len(inside) == 1 and inside[0].preimage == (1, 1),
        "on_patch": len(inside) == 1 and inside[0].on_patch,
        "off_patch": len(outside) == 1 and not outside[0].on_patch,
    }
    return checks, {"implicit": str(p), "hits": [h.to_dict() for h in inside]}, []


def _fx_moebius(seed):
    m = moebius()
    res = interp.implicitize(m, simplex_support(3, 3), seed)
    small = res.selection.small
    support = simplex_support(3, 3)
    mp = interp.build_matrix(m, support, len(support) - 1, seed)
    pre = rayshoot.preprocess(mp, m, seed)
    patch = rayshoot.SurfacePatch.parse(m, None)
    ray = rayshoot.Ray.parse("1,-3/2;1/3,1/5;1/2,-1/7")
    hits = rayshoot.shoot(pre, patch, ray)
    oracle = oracle_ray_roots(m.known_equations[0], ray)
    match = oracle is not None and len(oracle) == len(hits) and all(
        h.rho.lo <= o.hi and o.lo <= h.rho.hi for h, o in zip(hits, oracle))
    checks = {
        "kernel_dim_1": res.kernel_dim == 1,
        "cubic": len(small) == 1 and small[0].total_degree() == 3,
        "implicit_equation": len(small) == 1 and proportional(small[0], m.known_equations[0]),
        "ray_matches_oracle": match,
    }
    return checks, {"implicit": [str(p) for p in small], "hits": [h.to_dict() for h in hits]}, []


def _fx_bicubic(seed):
    m = bicubic(FLOAT)
    support = bicubic_support()
    mp = interp.build_matrix(m, support, len(support) - 1, seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pre = rayshoot.preprocess(mp, m, seed, validate="auto")
        p = rayshoot.ray_poly(pre, rayshoot.Ray.parse(BICUBIC_RAY, FLOAT))
    notes = [str(w.message) for w in caught]
    checks = {
        "support_size_715": len(support) == 715,
        "preprocessing_completed": True,
        "ray_poly_degree_le_18": p.degree() <= 18,
        "condition_warning": any("ill-conditioned" in n for n in notes),
    }
    return checks, {"condition": pre.condition, "ray_poly_degree": p.degree()}, notes


FIXTURES = {
    "twisted-cubic": _fx_twisted_cubic,
    "two-cylinders": _fx_two_cylinders,
    "viviani-a2": _fx_viviani,
    "curve4d": _fx_curve4d,
    "crossed": _fx_crossed,
    "moebius": _fx_moebius,
    "bicubic-float": _fx_bicubic,
}


def run_fixture(name: str, seed: int = 0) -> dict:
    if name not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
    t0 = time.perf_counter()
    checks, details, notes = FIXTURES[name](seed)
    return {"name": name, "passed": all(checks.values()), "checks": checks,
            "details": details, "warnings": notes, "seconds": time.perf_counter() - t0}


def run_all(seed: int = 0) -> List[dict]:
    return [run_fixture(name, seed) for name in FIXTURES]
