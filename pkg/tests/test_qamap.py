"""Tests for the quadratic family, orbits, and the connectivity classifier."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrbottcher.affine import StretchParams
from qrbottcher.oracles import escape_time
from qrbottcher.qamap import (
    Connectivity,
    OrbitStatus,
    QAMap,
    classify_N,
    escape_radius,
    eval_H,
    eval_f,
    orbit,
)


def test_K_one_reduces_to_the_polynomial():
    m = QAMap(StretchParams(1.0), -0.75 + 0.1j)
    for z in (0.3, 1.0 - 2.0j, -5.0j):
        assert eval_f(m, z) == z * z + m.c


def test_eval_H_is_f_with_c_zero():
    p = StretchParams(2.5, 0.3)
    m = QAMap(p, 1.0 + 1.0j)
    z = 0.7 - 0.2j
    assert eval_H(m, z) == eval_f(QAMap(p, 0j), z)


def test_escape_radius_values():
    assert escape_radius(QAMap(StretchParams(1.0), 0j)) == 2.0
    assert escape_radius(QAMap(StretchParams(1.0), 3.0 + 4.0j)) == pytest.approx(
        1.0 + math.sqrt(6.0)
    )


@given(
    st.floats(min_value=1.0, max_value=10.0),
    st.floats(min_value=-1.5, max_value=1.5),
    st.complex_numbers(max_magnitude=20.0, allow_nan=False, allow_infinity=False),
    st.floats(min_value=0.0, max_value=2.0 * math.pi),
    st.floats(min_value=1e-6, max_value=50.0),
)
@settings(max_examples=300, deadline=None)
def test_orbits_double_beyond_the_escape_radius(K, th, c, ang, excess):
    m = QAMap(StretchParams(K, th), c)
    R = escape_radius(m)
    z = (R + excess) * complex(math.cos(ang), math.sin(ang))
    assert abs(eval_f(m, z)) >= 2.0 * abs(z)


def test_orbit_escapes_immediately_from_far_out():
    m = QAMap(StretchParams(2.0, 0.1), 1.0)
    res = orbit(m, 50.0, max_iter=10, keep_trajectory=True)
    assert res.status is OrbitStatus.ESCAPED
    assert res.steps == 1
    assert len(res.trajectory) == res.steps + 1
    assert res.trajectory[0] == 50.0


def test_orbit_detects_the_superattracting_cycle():
    # z^2 - 1 has the 2-cycle 0 -> -1 -> 0
    m = QAMap(StretchParams(1.0), -1.0)
    res = orbit(m, 0j, max_iter=100)
    assert res.status is OrbitStatus.BOUNDED


def test_orbit_converging_interior_point_is_bounded():
    m = QAMap(StretchParams(1.0), 0j)
    res = orbit(m, 0.5, max_iter=200)
    assert res.status is OrbitStatus.BOUNDED  # squares down to the fixed point 0


def test_orbit_small_budget_is_undetermined():
    m = QAMap(StretchParams(1.0), 0.3)
    res = orbit(m, 0j, max_iter=2)
    assert res.status is OrbitStatus.UNDETERMINED
    assert res.steps is None


def test_orbit_counts_steps_to_escape():
    # 0 -> 1 -> 2 -> 5 with R = 1 + sqrt(2): first point beyond R is 5
    m = QAMap(StretchParams(1.0), 1.0)
    res = orbit(m, 0j, max_iter=50, keep_trajectory=True)
    assert res.status is OrbitStatus.ESCAPED
    assert res.steps == 3
    assert res.trajectory == (0j, 1 + 0j, 2 + 0j, 5 + 0j)


def test_orbit_rejects_nonpositive_budget():
    with pytest.raises(ValueError):
        orbit(QAMap(StretchParams(1.0), 0j), 1.0, max_iter=0)


def test_qamap_rejects_nonfinite_c():
    with pytest.raises(ValueError):
        QAMap(StretchParams(1.0), complex(math.inf, 0.0))


@pytest.mark.parametrize(
    "K, c, expected",
    [
        (1.0, 0.0, Connectivity.CONNECTED),
        (1.0, -1.0, Connectivity.CONNECTED),
        (1.0, 1.0, Connectivity.INFINITELY_MANY_COMPONENTS),
        (2.0, 10.0, Connectivity.INFINITELY_MANY_COMPONENTS),
        (2.0, 0.05, Connectivity.CONNECTED),
    ],
)
def test_classifier_on_decisive_parameters(K, c, expected):
    m = QAMap(StretchParams(K), complex(c))
    assert classify_N(m, 512) is expected


def test_classifier_undetermined_with_tiny_budget():
    m = QAMap(StretchParams(2.0), 0.3)
    assert classify_N(m, 1) is Connectivity.UNDETERMINED


@given(
    st.sampled_from([1.0, 1.3, 2.0, 3.5]),
    st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=4.0, allow_nan=False, allow_infinity=False),
)
@settings(max_examples=200, deadline=None)
def test_orbit_agrees_with_plain_iteration_oracle(K, c, z):
    """When orbit says ESCAPED, the bare loop sees the same step count."""
    m = QAMap(StretchParams(K, 0.4), c)
    res = orbit(m, z, max_iter=60)
    t = escape_time(m, z, escape_radius(m), max_iter=60)
    if res.status is OrbitStatus.ESCAPED:
        assert t == res.steps
    elif res.status is OrbitStatus.UNDETERMINED:
        assert t is None
    else:
        # a detected cycle never escapes later; give the oracle a long leash
        assert escape_time(m, z, escape_radius(m), max_iter=2000) is None
