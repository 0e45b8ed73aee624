"""Tests for fixed rays and dilatation growth along them."""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrbottcher.affine import StretchParams, stretch_dilatation
from qrbottcher.dilatation import (
    DiskMobius,
    FixedRay,
    H_deriv_ratio,
    cos_phi_lower_bound,
    distortion_growth,
    fixed_ray,
    fixed_rays,
    mobius_A,
    mobius_power,
    mu_fixed_ray,
    mu_iterate_general,
    ray_angle_defect,
    trace_sq,
)
from qrbottcher.errors import BranchPointError, MultipleRootsError
from qrbottcher.oracles import brute_force_fixed_rays, wirtinger_fd
from qrbottcher.qamap import QAMap, eval_H

params_st = st.builds(
    StretchParams,
    st.floats(min_value=1.0, max_value=12.0),
    st.floats(min_value=-1.5, max_value=1.5),
)

mu_st = st.complex_numbers(max_magnitude=0.95, allow_nan=False, allow_infinity=False)


def test_axis_cases_have_the_real_ray():
    assert fixed_ray(StretchParams(3.7, 0.0)).phi == 0.0
    assert fixed_ray(StretchParams(5.0, math.pi / 2)).phi == 0.0


def test_three_rays_beyond_the_bifurcation():
    rays = fixed_rays(StretchParams(3.0, 0.0))
    phis = [r.phi for r in rays]
    assert len(phis) == 3
    assert phis[1] == pytest.approx(0.0, abs=1e-13)
    assert phis[0] == pytest.approx(-math.pi / 3, abs=1e-12)
    assert phis[2] == pytest.approx(math.pi / 3, abs=1e-12)


def test_strict_mode_refuses_to_choose():
    with pytest.raises(MultipleRootsError):
        fixed_ray(StretchParams(3.0, 0.0), strict=True)
    # a unique-ray case is fine in strict mode
    fixed_ray(StretchParams(1.5, 0.4), strict=True)


def test_bisection_agrees_with_the_brute_force_scan():
    for K, th in ((1.5, 0.4), (2.5, -0.9), (4.0, 0.25), (8.0, 1.1)):
        p = StretchParams(K, th)
        ours = sorted(r.phi for r in fixed_rays(p))
        oracle = brute_force_fixed_rays(K, th, n_angles=400_001)
        assert len(ours) == len(oracle)
        for a, b in zip(ours, oracle):
            assert abs(a - b) < 1e-6


@given(params_st)
@settings(max_examples=150, deadline=None)
def test_fixed_ray_defect_residual(p):
    ray = fixed_ray(p)
    assert abs(ray_angle_defect(p, ray.phi)) < 1e-12
    assert p.theta - math.pi / 2 < ray.phi < p.theta + math.pi / 2 or ray.phi == 0.0


@given(params_st)
@settings(max_examples=100, deadline=None)
def test_fixed_ray_really_is_invariant_under_H(p):
    ray = fixed_ray(p)
    m = QAMap(p, 0j)
    z = cmath.exp(1j * ray.phi)
    w = eval_H(m, z)
    gap = (cmath.phase(w) - ray.phi + math.pi) % (2.0 * math.pi) - math.pi
    assert abs(gap) < 1e-10
    assert abs(w) > 0.9  # H expands moduli on the unit circle


def test_H_deriv_ratio_is_unimodular_and_matches_the_ray():
    p = StretchParams(2.0, 0.3)
    m = QAMap(p, 0j)
    for z in (1.0 + 0.5j, -2.0j, 0.1 - 3.0j):
        r = H_deriv_ratio(m, z)
        assert abs(abs(r) - 1.0) < 1e-14
    ray = fixed_ray(p)
    r_on_ray = H_deriv_ratio(m, cmath.exp(1j * ray.phi))
    assert abs(r_on_ray - cmath.exp(-1j * ray.phi)) < 1e-12
    with pytest.raises(BranchPointError):
        H_deriv_ratio(m, 0j)


def test_exact_rational_dilatation_values():
    p = StretchParams(2.0, 0.0)
    assert mu_fixed_ray(p, 1) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert mu_fixed_ray(p, 2) == pytest.approx(3.0 / 5.0, abs=1e-15)
    assert mu_fixed_ray(p, 3) == pytest.approx(7.0 / 9.0, abs=1e-15)


def test_K_one_is_conformal_at_every_order():
    p = StretchParams(1.0, 0.0)
    assert mu_fixed_ray(p, 17) == 0j
    assert distortion_growth(p, 17) == 1.0


@given(params_st, st.integers(min_value=1, max_value=40))
@settings(max_examples=100, deadline=None)
def test_closed_recurrence_equals_the_mobius_power(p, n):
    ray = fixed_ray(p)
    by_recurrence = mu_fixed_ray(p, n, ray)
    A = mobius_A(p, ray)
    by_power = mobius_power(A, n - 1).apply(stretch_dilatation(p))
    assert abs(by_recurrence - by_power) < 1e-11


def test_general_recurrence_on_the_ray_matches_the_closed_form():
    for K, th in ((2.0, 0.0), (5.0, 0.0), (4.0, 0.1)):
        p = StretchParams(K, th)
        ray = fixed_ray(p)
        m = QAMap(p, 0j)
        z = 1.7 * cmath.exp(1j * ray.phi)
        for n in (1, 2, 5, 12, 30):
            gap = abs(mu_iterate_general(m, z, n) - mu_fixed_ray(p, n, ray))
            assert gap < 1e-12


def test_general_recurrence_against_finite_differences():
    """Low iterates: compare with Wirtinger quotients of the map itself."""
    p = StretchParams(2.0, 0.3)
    m = QAMap(p, 0j)
    z = 0.7 + 0.2j

    def H1(w):
        return eval_H(m, w)

    def H2(w):
        return eval_H(m, eval_H(m, w))

    for n, fn in ((1, H1), (2, H2)):
        fz, fzb = wirtinger_fd(fn, z, step=1e-6)
        assert abs(mu_iterate_general(m, z, n) - fzb / fz) < 1e-7


def test_general_recurrence_input_validation():
    m = QAMap(StretchParams(2.0, 0.1), 0j)
    with pytest.raises(BranchPointError):
        mu_iterate_general(m, 0j, 3)
    with pytest.raises(ValueError):
        mu_iterate_general(m, 1.0, 0)


@given(params_st)
@settings(max_examples=200, deadline=None)
def test_trace_formula_matches_the_matrix(p):
    ray = fixed_ray(p)
    A = mobius_A(p, ray)
    assert abs(A.det() - 1.0) < 1e-12
    t2 = (A.trace() ** 2).real
    assert abs(trace_sq(p, ray) - t2) < 1e-10
    assert trace_sq(p, ray) >= 4.0 - 1e-9


def test_cos_bound_closed_form():
    assert cos_phi_lower_bound(10.0) == pytest.approx(-41.0 / 121.0, abs=1e-15)
    assert cos_phi_lower_bound(1.0) == pytest.approx(1.0)
    # (K+1)^2 + (-K^2 + 6K - 1) = 8K ties the bound to tr^2 = 4
    for K in (1.0, 2.0, 3.7, 9.9):
        assert (K + 1.0) ** 2 + (-K * K + 6.0 * K - 1.0) == pytest.approx(8.0 * K)


def test_distortion_grows_and_diverges():
    p = StretchParams(2.0, math.pi / 8)
    vals = [distortion_growth(p, n) for n in range(1, 40)]
    finite = [v for v in vals if math.isfinite(v)]
    assert all(a < b for a, b in zip(finite, finite[1:]))
    assert distortion_growth(p, 100000) == math.inf


@given(mu_st, mu_st, mu_st)
@settings(max_examples=100, deadline=None)
def test_mobius_compose_is_associative(a, b, c):
    f = DiskMobius(1.0, a, a.conjugate(), 1.0)
    g = DiskMobius(1.0, b, b.conjugate(), 1.0)
    h = DiskMobius(1.0, c, c.conjugate(), 1.0)
    w = 0.3 + 0.1j
    lhs = f.compose(g).compose(h).apply(w)
    rhs = f.compose(g.compose(h)).apply(w)
    assert abs(lhs - rhs) < 1e-10


def test_mobius_power_det_while_entries_moderate():
    # det is a difference of products and cancels once the (genuinely
    # unbounded) hyperbolic coefficients grow, so only check it early on.
    p = StretchParams(2.0, math.pi / 8)
    A = mobius_A(p, fixed_ray(p))
    assert abs(mobius_power(A, 60).det() - 1.0) < 1e-10


def test_mobius_power_apply_stable_at_large_n():
    p = StretchParams(2.0, math.pi / 8)
    ray = fixed_ray(p)
    A = mobius_A(p, ray)
    mu1 = stretch_dilatation(p)
    for n in (150, 1000):
        got = mobius_power(A, n - 1).apply(mu1)
        assert abs(got - mu_fixed_ray(p, n, ray)) < 1e-12
        assert abs(got) <= 1.0 + 1e-12


def test_mobius_power_rejects_negative_exponent():
    with pytest.raises(ValueError):
        mobius_power(DiskMobius(1.0, 0.0, 0.0, 1.0), -1)
