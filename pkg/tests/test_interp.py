from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from interpmat import interp
from interpmat.corpus import crossed, crossed_support, same_span, twisted_cubic, two_cylinders
from interpmat.errors import InputError, ParseError, RankDeficient, SamplingFailed
from interpmat.interp import (InterpMatrix, ParamModel, PointCloud, build_matrix,
                              implicit_from_det, kernel, membership, sample_params,
                              select_small_kernel_polys)
from interpmat.polycore import linalg, parse_poly
from interpmat.supports import MonomialSupport, simplex_support

X3 = ("x1", "x2", "x3")


@pytest.fixture(scope="module")
def tc_matrix():
    return build_matrix(twisted_cubic(), simplex_support(3, 6), rng_seed=0)


def circle_cloud(count):
    pts = []
    for s in range(1, count + 1):
        s = Fraction(s, 3)
        pts.append(((1 - s * s) / (1 + s * s), 2 * s / (1 + s * s)))
    return PointCloud(tuple(pts))


# -- sampling ----------------------------------------------------------------

def test_sampling_is_deterministic_and_distinct():
    a = sample_params(twisted_cubic(), 3, rng_seed=7)
    assert a == sample_params(twisted_cubic(), 3, rng_seed=7)
    assert len(set(a)) == 3
    assert all(abs(t[0].numerator) <= 1000 and 1 <= t[0].denominator <= 1000 for t in a)


def test_sampling_avoids_poles():
    m = ParamModel.from_strings([("1", "t1"), "t1"])
    taus = sample_params(m, 14, rng_seed=1, bound=3)
    assert all(t[0] != 0 for t in taus)


def test_sampling_failure_when_budget_exhausted():
    # with |p|, q <= 1 every candidate is one of the poles -1, 0, 1
    m = ParamModel.from_strings([("1", "t1^3 - t1"), "t1"])
    with pytest.raises(SamplingFailed):
        sample_params(m, 1, bound=1, max_retries=50)


def test_model_validation():
    with pytest.raises(InputError):
        ParamModel.from_strings([("t1", "0"), "t1"])
    with pytest.raises(InputError):
        ParamModel.from_strings(["t1", "t2"], params=("t1", "t2"))


# -- matrices and kernels ----------------------------------------------------

def test_twisted_cubic_matrix_and_kernel(tc_matrix):
    assert tc_matrix.shape == (84, 84)
    ker = kernel(tc_matrix)
    assert len(ker) == 65
    sel = select_small_kernel_polys(ker, tc_matrix.support)
    assert len(sel.small) == 3
    refs = [parse_poly(q, X3) for q in ("x1^2 - x2", "x2^2 - x1*x3", "x1*x2 - x3")]
    assert same_span(sel.small, refs)
    assert sorted({p.total_degree() for p in sel.reduced}) == [2, 3, 4, 5, 6]


def test_two_cylinders_kernel():
    res = interp.implicitize(two_cylinders(), simplex_support(3, 8))
    assert res.matrix.shape == (165, 165)
    assert res.kernel_dim == 133
    refs = [parse_poly(q, X3) for q in ("x1^2 - x3", "x2^2 + x3 - 1")]
    assert same_span(res.selection.small, refs)
    assert sorted({p.total_degree() for p in res.selection.reduced}) == list(range(2, 9))


def test_constant_support_gives_one_by_one():
    s = MonomialSupport(X3, ((0, 0, 0),))
    m = build_matrix(twisted_cubic(), s, mu=1)
    assert m.rows == ((1,),)


def test_identity_has_empty_kernel():
    s = simplex_support(1, 2)
    m = InterpMatrix(s, ((1, 0, 0), (0, 1, 0), (0, 0, 1)), (), "exact")
    assert kernel(m) == []


def test_circle_cloud_kernel_matches_bruteforce_nullspace():
    cloud = circle_cloud(10)
    s = simplex_support(2, 2)
    m = build_matrix(cloud, s, mu=6)
    assert m.shape == (6, 6)
    ours = [p for _, p in kernel(m)]
    oracle = sympy.Matrix([[sympy.Rational(str(v)) for v in r] for r in m.rows]).nullspace()
    assert len(ours) == len(oracle) == 1
    circle = parse_poly("x1^2 + x2^2 - 1", ("x1", "x2"))
    assert same_span(ours, [circle])
    vec = [Fraction(str(v)) for v in oracle[0]]
    assert same_span(ours, [s.poly_from_vector(vec)])


def test_cloud_parse_errors():
    with pytest.raises(ParseError, match="line 2"):
        PointCloud.from_csv("1,2\n1,2,3\n")
    with pytest.raises(ParseError, match="line 1"):
        PointCloud.from_csv("0.5,1\n")
    assert PointCloud.from_csv("0.5,1\n", "float").points == ((0.5, 1.0),)


# -- implicit equation from M' -----------------------------------------------

def test_crossed_surface_implicit_equation():
    m = build_matrix(crossed(), crossed_support(), mu=4)
    p = implicit_from_det(m)
    assert same_span([p], [parse_poly("x3 - x1^2*x2^2", X3)])
    assert p.leading_coeff() == 1


def test_parabola_implicit_equation_matches_bruteforce():
    par = ParamModel.from_strings(["t1", "t1^2"])
    s = MonomialSupport(("x1", "x2"), ((0, 1), (2, 0), (1, 0), (0, 0)))
    m = build_matrix(par, s, mu=3, rng_seed=4)
    p = implicit_from_det(m)
    oracle = sympy.Matrix([[sympy.Rational(str(v)) for v in r] for r in m.rows]).nullspace()
    assert same_span([p], [s.poly_from_vector([Fraction(str(v)) for v in oracle[0]])])
    assert same_span([p], [parse_poly("x2 - x1^2", ("x1", "x2"))])


def test_line_implicit_equation():
    line = ParamModel.from_strings(["t1", "t1"])
    s = MonomialSupport(("x1", "x2"), ((1, 0), (0, 1)))
    p = implicit_from_det(build_matrix(line, s, mu=1))
    assert same_span([p], [parse_poly("x1 - x2", ("x1", "x2"))])


def test_implicit_from_det_agrees_with_cofactor_expansion():
    m = build_matrix(crossed(), crossed_support(), mu=4, rng_seed=3)
    p = implicit_from_det(m)
    for x in [(2, 3, 5), (Fraction(1, 2), -1, 7), (0, 1, 1)]:
        d = interp.bordered_det(m, x)
        sym = sympy.Matrix([list(r) for r in m.rows] +
                           [[sympy.Rational(str(v)) for v in m.support.evaluate(x)]]).det()
        assert d == Fraction(str(sym))
    # p and det M(x) are proportional
    ratio = {interp.bordered_det(m, x) / p.evaluate(x) for x in [(2, 3, 5), (1, 2, 3), (4, 1, 1)]}
    assert len(ratio) == 1 and 0 not in ratio


def test_rank_deficient_mprime_raises():
    m = build_matrix(twisted_cubic(), simplex_support(3, 2), mu=9)
    with pytest.raises(RankDeficient):
        implicit_from_det(m)


# -- membership --------------------------------------------------------------

def test_membership_examples(tc_matrix):
    assert membership(tc_matrix, (2, 4, 8)) is True
    assert membership(tc_matrix, (1, 1, 2)) is False
    tau = sample_params(twisted_cubic(), 1, rng_seed=99)[0]
    assert membership(tc_matrix, twisted_cubic().evaluate(tau)) is True


def test_float_membership_score():
    m = build_matrix(twisted_cubic().to_mode("float"), simplex_support(3, 2))
    on = membership(m, (0.5, 0.25, 0.125))
    off = membership(m, (1.0, 1.0, 2.0))
    assert on < 1e-8 < off


# -- properties --------------------------------------------------------------

@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_kernel_polys_vanish_on_fresh_samples(seed):
    m = build_matrix(twisted_cubic(), simplex_support(3, 3), rng_seed=seed)
    polys = [p for _, p in kernel(m)]
    assert len(polys) == 10
    assert interp.vanishes_on_samples(polys, twisted_cubic(), 20, seed, exclude=m.samples)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 19),
       st.fractions(min_value=-50, max_value=50).filter(lambda v: v != 0))
def test_row_scaling_leaves_kernel_unchanged(seed, row, factor):
    m = build_matrix(twisted_cubic(), simplex_support(3, 3), rng_seed=seed)
    rows = [list(r) for r in m.rows]
    rows[row] = [v * factor for v in rows[row]]
    a = linalg.nullspace(list(m.rows), 20)
    b = linalg.nullspace(rows, 20)
    assert a == b


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.integers(-30, 30))
def test_kernel_stable_under_on_variety_row(seed, t):
    m = build_matrix(twisted_cubic(), simplex_support(3, 3), rng_seed=seed)
    q = twisted_cubic().evaluate((t,))
    a = linalg.nullspace(list(m.rows), 20)
    b = linalg.nullspace(list(m.rows) + [m.support.evaluate(q)], 20)
    assert a == b


def test_float_mode_kernel_dimension():
    m = build_matrix(twisted_cubic().to_mode("float"), simplex_support(3, 3), rng_seed=2)
    assert m.shape == (40, 20)
    ker = kernel(m)
    assert len(ker) == 10
    sel = select_small_kernel_polys(ker, m.support, mode="float")
    assert len(sel.small) == 3 and all(p.total_degree() == 2 for p in sel.small)


def test_fewest_terms_criterion():
    m = build_matrix(twisted_cubic(), simplex_support(3, 2))
    sel = select_small_kernel_polys(kernel(m), m.support, criterion="terms")
    assert sel.values and min(sel.values) == 2
    assert all(len(p.terms) == 2 for p in sel.small)
