"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Exact criteria use zero tolerance.  Oracles are independent of the code
under test: sympy for nullspaces, determinants and ray roots, and the known
implicit equations for off-curve rejection sampling.
"""

from __future__ import annotations

import random
import warnings
from fractions import Fraction

import pytest
import sympy

from interpmat import chow, interp
from interpmat.corpus import (BICUBIC_RAY, bicubic, bicubic_support, crossed, crossed_support,
                              curve4d, moebius, plane, plane_support, same_span, sphere,
                              twisted_cubic, two_cylinders)
from interpmat.errors import RayOnSurface
from interpmat.interp import build_matrix, fresh_samples
from interpmat.polycore import exact_divide_power, parse_poly
from interpmat.rayshoot import CONDITION_WARN, Ray, SurfacePatch, preprocess, ray_poly, shoot
from interpmat.supports import simplex_support

X3 = ("x1", "x2", "x3")
SEEDS = range(10)


def Q(text):
    return parse_poly(text, X3)


def rat(v):
    return sympy.Rational(str(v))


def random_off_curve(model, count, seed, on_variety):
    """Rational ambient points rejected by ``on_variety``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        x = tuple(Fraction(rng.randint(-60, 60), rng.randint(1, 12)) for _ in range(model.n))
        if not on_variety(x):
            out.append(x)
    return out


def on_known(model):
    return lambda x: all(q.evaluate(x) == 0 for q in model.known_equations)


@pytest.fixture(scope="module")
def cone_systems():
    return {"twisted-cubic": (twisted_cubic(), chow.space_curve_system(twisted_cubic(), 0)),
            "two-cylinders": (two_cylinders(), chow.space_curve_system(two_cylinders(), 0))}


# -- 1, 2: interpolation kernels ---------------------------------------------

def test_criterion_1_twisted_cubic_kernel(criterion):
    with criterion(1, "twisted cubic 84x84, kernel 65, three quadrics span the known ideal"):
        res = interp.implicitize(twisted_cubic(), simplex_support(3, 6))
        assert res.matrix.shape == (84, 84) and res.matrix.mode == "exact"
        assert res.kernel_dim == 65
        small = res.selection.small
        assert len(small) == 3 and all(p.total_degree() == 2 for p in small)
        assert same_span(small, [Q("x1^2 - x2"), Q("x2^2 - x1*x3"), Q("x1*x2 - x3")])


def test_criterion_2_two_cylinders_kernel(criterion):
    with criterion(2, "two cylinders 165x165, kernel 133, two quadrics span the known ideal"):
        res = interp.implicitize(two_cylinders(), simplex_support(3, 8))
        assert res.matrix.shape == (165, 165)
        assert res.kernel_dim == 133
        small = res.selection.small
        assert len(small) == 2 and all(p.total_degree() == 2 for p in small)
        assert same_span(small, [Q("x1^2 - x3"), Q("x2^2 + x3 - 1")])


# -- 3: resultant structure --------------------------------------------------

@pytest.mark.parametrize("model_fn,delta", [(twisted_cubic, 3), (two_cylinders, 4)])
def test_criterion_3_resultant_structure(criterion, model_fn, delta):
    m = model_fn()
    with criterion(3, f"{m.name}: resultant degree {2 * delta}, E_L^{delta} divides, "
                      f"quotient degree {delta} vanishes, 10 seeds"):
        for seed in SEEDS:
            cfg = chow.make_config(m, seed)
            R, EL, _ = chow.chow_resultant(m, cfg)
            assert R.total_degree() == 2 * delta
            assert EL.total_degree() == 1
            q = exact_divide_power(R, EL, delta)
            assert q * EL**delta == R
            assert q.total_degree() == delta
            for tau in fresh_samples(m, 100, seed + 1000):
                assert q.evaluate(m.evaluate(tau)) == 0


# -- 4, 5: three cones -------------------------------------------------------

@pytest.mark.parametrize("name", ["twisted-cubic", "two-cylinders"])
def test_criterion_4_three_surfaces_cut_out_curve(criterion, cone_systems, name):
    m, system = cone_systems[name]
    with criterion(4, f"{name}: three cones vanish on 100 samples, reject 200 probes"):
        assert len(system.polynomials) == 3
        apexes = sympy.Matrix([[rat(v) for v in s.config.G[0]] for s in system.surfaces])
        assert apexes.rank() == 3  # the affine apexes are not collinear
        for tau in fresh_samples(m, 100, 777):
            pt = m.evaluate(tau)
            assert all(p.evaluate(pt) == 0 for p in system.polynomials)
        for x in random_off_curve(m, 200, 4242, on_known(m)):
            assert any(p.evaluate(x) != 0 for p in system.polynomials)


@pytest.mark.parametrize("name", ["twisted-cubic", "two-cylinders"])
def test_criterion_5_cone_property(criterion, cone_systems, name):
    m, system = cone_systems[name]
    with criterion(5, f"{name}: 20 (sample, lambda) pairs per cone vanish"):
        rng = random.Random(55)
        for cone in system.surfaces:
            g = cone.config.G[0]
            assert g[0] == 1
            for tau in fresh_samples(m, 20, 909):
                pt = m.evaluate(tau)
                lam = Fraction(rng.randint(-99, 99), rng.randint(1, 99))
                probe = [a + lam * (b - a) for a, b in zip(g[1:], pt)]
                assert cone.poly.evaluate(probe) == 0


# -- 6: ray shooting ---------------------------------------------------------

def sympy_ray_roots(known, ray):
    """Positive roots with multiplicity of the known equation along the ray."""
    rho = sympy.Symbol("rho")
    xs = [rat(a) * rho + rat(b) for a, b in zip(ray.a, ray.b)]
    expr = sum(rat(c) * sympy.Mul(*[x**e for x, e in zip(xs, mon)])
               for mon, c in known.terms.items())
    poly = sympy.Poly(sympy.expand(expr), rho)
    if poly.is_zero:
        return None
    counts = {}
    for r in poly.real_roots():
        if r > 0:
            counts[r] = counts.get(r, 0) + 1
    return sorted(counts.items(), key=lambda rk: float(rk[0]))


def random_ray(rng):
    def q():
        return Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    while True:
        a = (q(), q(), q())
        if any(a):
            return Ray(a, (q(), q(), q()))


SURFACES = {"crossed": (crossed, crossed_support), "plane": (plane, plane_support),
            "sphere": (sphere, lambda: simplex_support(3, 2))}


@pytest.mark.parametrize("name", sorted(SURFACES))
def test_criterion_6_rays_match_substitution_oracle(criterion, name):
    model_fn, support_fn = SURFACES[name]
    m, support = model_fn(), support_fn()
    with criterion(6, f"{name}: 20 random rays agree with the substitution oracle"):
        pre = preprocess(build_matrix(m, support, len(support) - 1, 0), m, 0)
        patch = SurfacePatch.parse(m, None)
        rng = random.Random(606)
        for _ in range(20):
            ray = random_ray(rng)
            oracle = sympy_ray_roots(m.known_equations[0], ray)
            if oracle is None:
                with pytest.raises(RayOnSurface):
                    shoot(pre, patch, ray)
                continue
            hits = shoot(pre, patch, ray)
            assert len(hits) == len(oracle)
            for h, (r, k) in zip(hits, oracle):
                assert rat(h.rho.lo) <= r <= rat(h.rho.hi)
                assert h.multiplicity == k


def test_criterion_6_tangent_and_patch(criterion):
    with criterion(6, "tangent ray has multiplicity 2; crossed patch inside vs outside"):
        s = sphere()
        sup = simplex_support(3, 2)
        pre = preprocess(build_matrix(s, sup, len(sup) - 1, 0), s, 0)
        hits = shoot(pre, SurfacePatch.parse(s, None), Ray.parse("0,1;1,-1;0,0"))
        assert [(h.rho.lo, h.multiplicity) for h in hits] == [(1, 2)]

        c = crossed()
        sup = crossed_support()
        pre = preprocess(build_matrix(c, sup, len(sup) - 1, 0), c, 0)
        ray = Ray.parse("1,0;0,1;0,1")
        inside = shoot(pre, SurfacePatch.parse(c, "t1:-2,2;t2:-2,2"), ray)
        outside = shoot(pre, SurfacePatch.parse(c, "t1:2,3;t2:2,3"), ray)
        assert [h.preimage for h in inside] == [h.preimage for h in outside] == [(1, 1)]
        assert inside[0].on_patch and not outside[0].on_patch


# -- 7: proportionality ------------------------------------------------------

PROPORTIONAL = {"crossed": (crossed, crossed_support), "plane": (plane, plane_support),
                "sphere": (sphere, lambda: simplex_support(3, 2)),
                "moebius": (moebius, lambda: simplex_support(3, 3))}


@pytest.mark.parametrize("name", sorted(PROPORTIONAL))
def test_criterion_7_proportionality(criterion, name):
    model_fn, support_fn = PROPORTIONAL[name]
    m, support = model_fn(), support_fn()
    with criterion(7, f"{name}: <w, S(x)> / det M(x) is one nonzero constant at 20 points"):
        assert len(support) <= 20
        mp = build_matrix(m, support, len(support) - 1, 7)
        pre = preprocess(mp, m, 7)
        rng = random.Random(77)
        ratios = set()
        count = 0
        while count < 20:
            x = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(3))
            rows = [[rat(v) for v in r] for r in mp.rows] + [[rat(v) for v in support.evaluate(x)]]
            det = Fraction(str(sympy.Matrix(rows).det()))
            if det == 0:
                continue
            ratios.add(pre.value(x) / det)
            count += 1
        assert len(ratios) == 1
        assert ratios.pop() != 0


# -- 8: curve in 4-space -----------------------------------------------------

def test_criterion_8_curve4d(criterion):
    m = curve4d()
    with criterion(8, "curve4d: 5 degree-6 resultants with a cubed linear factor; "
                      "quotients vanish on 100 samples, reject 200 probes"):
        system = chow.general_codim_implicitize(m, 0, runs=5)
        assert len(system.polynomials) == 5
        for q, prov in zip(system.polynomials, system.provenance):
            R, EL, _ = chow.chow_resultant(m, prov["config"])
            assert R.total_degree() == 6 and EL.total_degree() == 1
            quotient = exact_divide_power(R, EL, 3)
            assert quotient * EL**3 == R
            assert quotient.total_degree() == 3 and same_span([quotient], [q])
        for tau in fresh_samples(m, 100, 888):
            pt = m.evaluate(tau)
            assert all(q.evaluate(pt) == 0 for q in system.polynomials)
        for x in random_off_curve(m, 200, 8888, lambda x: chow.point_on_variety(m, x)):
            assert any(q.evaluate(x) != 0 for q in system.polynomials)


# -- 9: bicubic stress (non-blocking) ----------------------------------------

def test_criterion_9_bicubic_float_stress(criterion):
    with criterion(9, "bicubic float (non-blocking): completes, deg p(rho) <= 18, "
                      "condition warning"):
        m = bicubic("float")
        support = bicubic_support()
        assert len(support) == 715
        mp = build_matrix(m, support, len(support) - 1, 0)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            pre = preprocess(mp, m, 0)
            p = ray_poly(pre, Ray.parse(BICUBIC_RAY, "float"))
        assert BICUBIC_RAY == "1,-13;1,12;-5,3"
        assert 0 < p.degree() <= 18
        assert pre.condition > CONDITION_WARN
        assert any("ill-conditioned" in str(w.message) for w in caught)
