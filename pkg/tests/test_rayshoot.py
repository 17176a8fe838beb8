from __future__ import annotations

import random
import warnings
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from interpmat.corpus import (crossed, crossed_support, moebius, plane, plane_support,
                              same_span, sphere)
from interpmat.errors import InversionFailed, RankDeficient, RayOnSurface
from interpmat.interp import InterpMatrix, build_matrix
from interpmat.polycore import UniPoly
from interpmat.rayshoot import Ray, SurfacePatch, preprocess, ray_poly, shoot
from interpmat.supports import MonomialSupport, simplex_support

SURFACES = {
    "crossed": (crossed, crossed_support),
    "plane": (plane, plane_support),
    "sphere": (sphere, lambda: simplex_support(3, 2)),
    "moebius": (moebius, lambda: simplex_support(3, 3)),
}

_cache = {}


def prepared(name, seed=0):
    key = (name, seed)
    if key not in _cache:
        model_fn, support_fn = SURFACES[name]
        model, support = model_fn(), support_fn()
        m = build_matrix(model, support, len(support) - 1, seed)
        _cache[key] = (model, m, preprocess(m, model, seed))
    return _cache[key]


def sym_det(rows):
    return Fraction(str(sympy.Matrix([[sympy.Rational(str(v)) for v in r] for r in rows]).det()))


def oracle_roots(model, ray):
    """Positive roots (value, multiplicity) of the known equation along the ray."""
    rho = sympy.Symbol("rho")
    xs = [sympy.Rational(str(a)) * rho + sympy.Rational(str(b)) for a, b in zip(ray.a, ray.b)]
    q = model.known_equations[0]
    expr = sum(sympy.Rational(str(c)) * sympy.Mul(*[x**e for x, e in zip(xs, m)])
               for m, c in q.terms.items())
    poly = sympy.Poly(sympy.expand(expr), rho)
    if poly.is_zero:
        return None
    counts = {}
    for r in poly.real_roots():  # repeated according to multiplicity
        if r > 0:
            counts[r] = counts.get(r, 0) + 1
    return list(counts.items())


# -- preprocessing -----------------------------------------------------------

def test_crossed_w_matches_cofactor_expansion():
    model, m, pre = prepared("crossed")
    n = len(m.support)
    cof = []
    for i in range(n):
        minor = [[r[j] for j in range(n) if j != i] for r in m.rows]
        cof.append(sym_det(minor) * (-1) ** (i + n - 1))
    assert same_span([m.support.poly_from_vector(pre.w)], [m.support.poly_from_vector(cof)])
    assert same_span([m.support.poly_from_vector(pre.w)],
                     [model.known_equations[0]])


def test_line_model_by_hand():
    s = MonomialSupport(("x1", "x2"), ((1, 0), (0, 1)))
    pre = preprocess(InterpMatrix(s, ((1, 1),), (), "exact"))
    assert pre.w[0] == -pre.w[1] != 0


def test_duplicate_rows_are_rank_deficient():
    s = MonomialSupport(("x1", "x2"), ((0, 0), (1, 0), (0, 1)))
    m = InterpMatrix(s, ((1, 2, 3), (1, 2, 3)), (), "exact")
    with pytest.raises(RankDeficient):
        preprocess(m)


@pytest.mark.parametrize("name", ["crossed", "plane", "sphere", "moebius"])
def test_proportionality_to_bordered_determinant(name):
    model, m, pre = prepared(name)
    assert len(m.support) <= 20
    rng = random.Random(5)
    ratios = set()
    seen = 0
    while seen < 20:
        x = tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 9)) for _ in range(3))
        d = sym_det(list(m.rows) + [m.support.evaluate(x)])
        if d == 0:
            continue
        ratios.add(pre.value(x) / d)
        seen += 1
    assert len(ratios) == 1
    assert ratios.pop() == pre.scale != 0


# -- ray polynomial ----------------------------------------------------------

def test_crossed_ray_poly():
    _, _, pre = prepared("crossed")
    p = ray_poly(pre, Ray.parse("1,0;0,1;0,1"))
    assert p.degree() == 2
    assert p.monic() == UniPoly([-1, 0, 1], var="rho")


def test_plane_axis_ray():
    _, _, pre = prepared("plane")
    p = ray_poly(pre, Ray.parse("0,0;0,0;1,0"))
    assert p.degree() == 1 and p.coeffs[0] == 0


def test_ray_inside_plane_raises():
    _, _, pre = prepared("plane")
    with pytest.raises(RayOnSurface):
        ray_poly(pre, Ray.parse("1,0;0,0;0,0"))


def test_zero_direction_rejected():
    with pytest.raises(Exception):
        Ray.parse("0,1;0,2;0,3")


# -- shooting ----------------------------------------------------------------

def test_crossed_hit_inside_patch():
    model, _, pre = prepared("crossed")
    hits = shoot(pre, SurfacePatch.parse(model, "t1:-2,2;t2:-2,2"), Ray.parse("1,0;0,1;0,1"))
    assert len(hits) == 1
    h = hits[0]
    assert h.rho.is_exact and h.rho.lo == 1
    assert h.point == (1, 1, 1) and h.preimage == (1, 1)
    assert h.on_patch and h.multiplicity == 1


def test_crossed_hit_outside_patch():
    model, _, pre = prepared("crossed")
    hits = shoot(pre, SurfacePatch.parse(model, "t1:2,3;t2:2,3"), Ray.parse("1,0;0,1;0,1"))
    assert len(hits) == 1 and hits[0].preimage == (1, 1) and not hits[0].on_patch


def test_sphere_tangent_ray_has_multiplicity_two():
    model, _, pre = prepared("sphere")
    # the line x1 = 1, x3 = 0 touches the unit sphere at (1, 0, 0)
    hits = shoot(pre, SurfacePatch.parse(model, None), Ray.parse("0,1;1,-1;0,0"))
    assert len(hits) == 1
    assert hits[0].multiplicity == 2 and hits[0].rho.lo == 1
    assert hits[0].preimage == (1, 0)


def test_patch_boundary_counts_as_inside():
    model, _, pre = prepared("crossed")
    hits = shoot(pre, SurfacePatch.parse(model, "t1:1,2;t2:-1,1"), Ray.parse("1,0;0,1;0,1"))
    assert hits[0].on_patch


def test_missing_preimage_reported_or_strict_failure():
    # the sphere parameterization misses the north pole (0, 0, 1)
    model, _, pre = prepared("sphere")
    ray = Ray.parse("0,0;0,0;1,0")
    patch = SurfacePatch.parse(model, None)
    hits = shoot(pre, patch, ray)
    assert [h.rho.lo for h in hits] == [1]
    assert hits[0].preimage is None and not hits[0].on_patch
    with pytest.raises(InversionFailed):
        shoot(pre, patch, ray, strict=True)


def test_shoot_is_deterministic():
    model, _, pre = prepared("sphere")
    ray = Ray.parse("1,-2;1/3,-1/3;1/5,-1/5")
    patch = SurfacePatch.parse(model, None)
    a = [h.to_dict() for h in shoot(pre, patch, ray)]
    model2, _, pre2 = prepared("sphere", seed=0)
    b = [h.to_dict() for h in shoot(pre2, SurfacePatch.parse(model2, None), ray)]
    assert a == b and a


coef = st.integers(-4, 4)


@pytest.mark.parametrize("name", ["crossed", "plane", "sphere"])
@settings(max_examples=20, deadline=None)
@given(st.tuples(coef, coef, coef).filter(any), st.tuples(coef, coef, coef))
def test_shoot_matches_direct_substitution_oracle(name, a, b):
    model, _, pre = prepared(name)
    ray = Ray(a, b)
    patch = SurfacePatch.parse(model, None)
    oracle = oracle_roots(model, ray)
    if oracle is None:
        with pytest.raises(RayOnSurface):
            shoot(pre, patch, ray)
        return
    hits = shoot(pre, patch, ray)
    assert all(h.rho.lo > 0 for h in hits)
    assert len(hits) == len(oracle)
    oracle.sort(key=lambda rk: float(rk[0]))
    for h, (r, k) in zip(hits, oracle):
        assert sympy.Rational(h.rho.lo) <= r <= sympy.Rational(h.rho.hi)
        assert h.multiplicity == k
        if h.preimage is not None:
            fx = model.evaluate(h.preimage)
            assert all(abs(float(u) - float(v)) < 1e-6 * (1 + abs(float(v)))
                       for u, v in zip(fx, h.point))


def test_float_mode_sphere_agrees_with_exact():
    model = sphere().to_mode("float")
    support = simplex_support(3, 2)
    m = build_matrix(model, support, len(support) - 1, 0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        pre = preprocess(m, model, 0)
    ray = Ray.parse("1,-2;1/3,-1/3;1/5,-1/5", "float")
    hits = shoot(pre, SurfacePatch.parse(model, None), ray)
    _, _, exact_pre = prepared("sphere")
    exact = shoot(exact_pre, SurfacePatch.parse(sphere(), None), Ray.parse("1,-2;1/3,-1/3;1/5,-1/5"))
    assert len(hits) == len(exact) == 2
    for h, e in zip(hits, exact):
        assert abs(float(h.rho.mid) - float(e.rho.mid)) < 1e-8
        assert h.preimage is not None
