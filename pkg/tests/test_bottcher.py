"""Tests for the coordinate construction on the neighborhood of infinity."""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrbottcher.affine import StretchParams
from qrbottcher.bottcher import (
    F_k,
    SolverConfig,
    build_coordinate,
    conjugacy_residual,
    default_config,
    log_coordinate,
    probe_differences,
    probe_points,
    psi,
    psi_dilatation_estimate,
    psi_inverse,
)
from qrbottcher.errors import NoConvergenceError, OutsideDomainError
from qrbottcher.oracles import F_k_unrolled, classical_bottcher
from qrbottcher.qamap import QAMap, escape_radius, eval_f, eval_H


def featured_map():
    return QAMap(StretchParams(2.0, math.pi / 6), 1.0 + 0j)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(math.nan)
    with pytest.raises(ValueError):
        SolverConfig(2.0, tol=0.0)
    with pytest.raises(ValueError):
        SolverConfig(2.0, k_max=0)
    with pytest.raises(ValueError):
        SolverConfig(2.0, alpha=2.5)


def test_default_config_clears_the_escape_radius():
    m = featured_map()
    cfg = default_config(m)
    assert math.exp(cfg.sigma) >= escape_radius(m)
    assert abs(m.c) * math.exp(-2.0 * cfg.sigma) < 0.5


def test_build_rejects_sigma_inside_the_escape_radius():
    m = featured_map()
    with pytest.raises(ValueError):
        build_coordinate(m, SolverConfig(0.1))


def test_F0_is_the_identity_and_negative_k_rejected():
    m = featured_map()
    cfg = default_config(m)
    X = cfg.sigma + 1.0 + 0.3j
    assert F_k(m, cfg, X, 0) == X
    with pytest.raises(ValueError):
        F_k(m, cfg, X, -1)


def test_F_k_outside_the_half_plane_raises():
    m = featured_map()
    cfg = default_config(m)
    with pytest.raises(OutsideDomainError):
        F_k(m, cfg, cfg.sigma - 0.5, 3)


@given(
    st.floats(min_value=1.0, max_value=6.0),
    st.floats(min_value=-1.5, max_value=1.5),
    st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
    st.floats(min_value=0.0, max_value=2.0),
    st.floats(min_value=-3.0, max_value=3.0),
    st.integers(min_value=0, max_value=6),
)
@settings(max_examples=150, deadline=None)
def test_telescoped_evaluation_matches_the_unrolled_definition(K, th, c, dr, di, k):
    """The production F_k must agree with the literal forward/backward form."""
    m = QAMap(StretchParams(K, th), c)
    cfg = default_config(m)
    X = complex(cfg.sigma + dr, di)
    a = F_k(m, cfg, X, k)
    b = F_k_unrolled(m, X, k)
    assert abs(a - b) < 1e-11 * max(1.0, abs(a))


def test_c_zero_collapses_to_the_identity_exactly():
    for K, th in ((1.0, 0.0), (2.0, 0.7), (6.0, -1.2)):
        m = QAMap(StretchParams(K, th), 0j)
        cfg = default_config(m)
        b = build_coordinate(m, cfg)
        assert b.k_used == 0
        for X in probe_points(cfg):
            assert F_k(m, cfg, X, 20) == X  # telescoped form: exact zero correction
        z = 2.5 * math.exp(cfg.sigma) * cmath.exp(0.4j)
        assert psi(b, z) == z


def test_probe_differences_decrease():
    m = featured_map()
    cfg = default_config(m)
    ds = probe_differences(m, cfg, 4)
    live = [d for d in ds if d > 0.0]
    assert live == sorted(live, reverse=True)
    assert live[0] < 0.1


def test_build_reports_progress_on_failure():
    m = featured_map()
    with pytest.raises(NoConvergenceError) as info:
        build_coordinate(m, default_config(m, tol=1e-12, k_max=2))
    diag = info.value.diagnostics
    assert len(diag["sup_differences"]) == 2
    assert diag["sup_differences"][1] < diag["sup_differences"][0]


def test_build_then_conjugate():
    m = featured_map()
    b = build_coordinate(m)
    assert b.validation_residual < 1e-10
    R2 = 2.0 * math.exp(b.config.sigma)
    for i in range(12):
        z = R2 * cmath.exp(2j * math.pi * i / 12)
        assert conjugacy_residual(b, z) < 1e-10


def test_psi_against_the_classical_limit_oracle():
    m = QAMap(StretchParams(1.0), -1.0 + 0j)
    b = build_coordinate(m)
    for i in range(8):
        z = 50.0 * cmath.exp(2j * math.pi * i / 8)
        assert abs(psi(b, z) - classical_bottcher(m.c, z)) < 1e-10


def test_psi_is_odd():
    b = build_coordinate(featured_map())
    z = 9.0 + 2.0j
    assert abs(psi(b, -z) + psi(b, z)) < 1e-13 * abs(z)


def test_psi_near_identity_far_out():
    b = build_coordinate(featured_map())
    z = 1e6 + 3e5j
    assert abs(psi(b, z) / z - 1.0) < 1e-10


def test_psi_domain_is_strict():
    b = build_coordinate(featured_map())
    with pytest.raises(OutsideDomainError):
        psi(b, math.exp(b.config.sigma) * 0.999)


def test_psi_inverse_roundtrip():
    b = build_coordinate(featured_map())
    for z in (20.0 + 1.0j, -9.5j, 8.2 - 8.2j):
        w = psi(b, z)
        assert abs(psi_inverse(b, w) - z) < 1e-11 * abs(z)


def test_log_coordinate_consistency_with_psi():
    b = build_coordinate(featured_map())
    z = 30.0 * cmath.exp(1.1j)
    X = cmath.log(z)
    assert abs(cmath.exp(log_coordinate(b, X)) - psi(b, z)) < 1e-12 * abs(z)


def test_dilatation_estimate_decays():
    b = build_coordinate(featured_map())
    small = abs(psi_dilatation_estimate(b, 1e4 + 0j, 10.0))
    large = abs(psi_dilatation_estimate(b, 1e2 + 0j, 0.1))
    assert small < large < 1e-2


def test_dilatation_estimate_stencil_must_fit():
    b = build_coordinate(featured_map())
    r = math.exp(b.config.sigma)
    with pytest.raises(OutsideDomainError):
        psi_dilatation_estimate(b, (r + 0.5) + 0j, 1.0)
    with pytest.raises(ValueError):
        psi_dilatation_estimate(b, 100.0 + 0j, 0.0)
