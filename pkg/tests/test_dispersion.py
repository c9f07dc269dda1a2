import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fdsw import dispersion as d
from oracles import c_jet_mp, group_jet_mp

kappas = st.floats(1e-4, 200.0)
tensions = st.floats(0.0, 5.0)


@pytest.mark.parametrize("k", [1e-3, 5e-3, 0.0099, 0.0101, 0.3, 1.0, 2.5, 10.0, 39.9, 40.1, 100.0])
@pytest.mark.parametrize("T", [0.0, 0.2, 1.0])
def test_speed_jet_matches_high_precision(k, T):
    ref = c_jet_mp(k, T)
    j = d.speed_jet(k, T)
    assert j.c == pytest.approx(ref[0], rel=1e-13)
    assert j.c1 == pytest.approx(ref[1], rel=1e-9, abs=1e-14)
    assert j.c2 == pytest.approx(ref[2], rel=1e-8, abs=1e-13)


@pytest.mark.parametrize("k", [1e-3, 0.5, 3.0, 50.0])
def test_group_velocity_jet(k):
    g1, g2 = d.group_velocity_jet(k, 0.3)
    r1, r2 = group_jet_mp(k, 0.3)
    assert g1 == pytest.approx(r1, rel=1e-12)
    assert g2 == pytest.approx(r2, rel=1e-8, abs=1e-13)


def test_long_wave_limit():
    j = d.speed_jet(0.0)
    assert j.c == 1.0
    assert j.c1 == 0.0
    assert j.c2 == pytest.approx(-1.0 / 3.0, rel=1e-14)


def test_branch_switches_are_continuous():
    for edge in (d.KAPPA_SERIES, d.KAPPA_FLAT):
        lo, hi = np.nextafter(edge, 0), np.nextafter(edge, np.inf)
        for T in (0.0, 1.0):
            a, b = d.speed_jet(lo, T), d.speed_jet(hi, T)
            assert a.c == pytest.approx(b.c, rel=1e-14)
            assert a.c1 == pytest.approx(b.c1, rel=1e-10, abs=1e-15)
            assert a.c2 == pytest.approx(b.c2, rel=1e-8, abs=1e-14)


def test_vectorized_equals_scalar():
    k = np.geomspace(1e-3, 100, 37)
    v = d.speed_squared(k, 0.4)
    assert np.array_equal(v, [d.speed_squared(x, 0.4) for x in k])
    assert isinstance(d.speed_squared(1.0), float)


def test_medium_and_number_agree():
    assert d.phase_speed(1.3, d.Medium(0.5)) == d.phase_speed(1.3, 0.5)


@given(kappas, tensions)
def test_speed_squared_positive_and_even(k, T):
    v = d.speed_squared(k, T)
    assert v > 0
    assert d.speed_squared(-k, T) == v


@given(kappas)
def test_gravity_speed_decreasing(k):
    assert d.speed_jet(k).c1 < 0
    assert d.phase_speed(k) <= 1.0


@given(st.integers(-50, 50), st.floats(-0.5, 0.5), st.floats(0.05, 5.0), st.sampled_from([1, -1]))
@settings(max_examples=200)
def test_omega_formula(n, xi, k, branch):
    x = n + xi
    ref = x * (d.phase_speed(k) + branch * d.phase_speed(k * x))
    assert d.omega(n, xi, k, 0.0, branch) == pytest.approx(ref, rel=1e-14, abs=1e-14)


@given(st.floats(0.01, 30.0), tensions)
@settings(max_examples=100)
def test_derivatives_against_finite_differences(k, T):
    h = 1e-5 * k
    cp, cm = d.phase_speed(k + h, T), d.phase_speed(k - h, T)
    j = d.speed_jet(k, T)
    assert j.c1 == pytest.approx((cp - cm) / (2 * h), rel=1e-5, abs=1e-9)
