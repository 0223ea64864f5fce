"""Threshold constants, constant-solution roots, and the turning potential."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussmink import (
    NoRootsError,
    Params,
    c_threshold,
    constant_radii,
    count_constant_solutions,
    critical_radius,
    density_threshold,
    disk_measure,
    potential,
    potential_deriv,
)
from gaussmink.scalar_kernel import disk_measure_deriv

# closed forms: at p = 1 the threshold is e^{-1/2}, at p = 0 it is 2/e
C_THRESHOLD_P1 = 0.6065306597126334
C_THRESHOLD_P0 = 0.7357588823428847


def bisect_roots(p, c, tol=1e-15):
    """Independent pure-python bisection for both constant radii."""
    peak = math.sqrt(2.0 - p)

    def f(t):
        return t ** (2.0 - p) * math.exp(-t * t / 2.0) - c

    def bisect(lo, hi):
        flo = f(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if hi - lo < tol * max(1.0, mid):
                break
            if (flo < 0.0) == (fm < 0.0):
                lo, flo = mid, fm
            else:
                hi = mid
        return 0.5 * (lo + hi)

    hi = peak
    while f(hi + 1.0) > 0.0:
        hi += 1.0
    return bisect(1e-12, peak), bisect(peak, hi + 1.0)


def test_threshold_closed_forms():
    assert c_threshold(1.0) == pytest.approx(C_THRESHOLD_P1, abs=1e-15)
    assert c_threshold(0.0) == pytest.approx(C_THRESHOLD_P0, abs=1e-15)
    assert c_threshold(1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)
    assert c_threshold(0.0) == pytest.approx(2.0 * math.exp(-1.0), rel=1e-15)


def test_density_threshold_is_scaled_threshold():
    for p in (0.0, 0.3, 1.0):
        assert density_threshold(p) == pytest.approx(
            c_threshold(p) / (2.0 * math.pi), rel=1e-15
        )


def test_critical_radius_peaks_disk_measure():
    # the measure must decrease on both sides of sqrt(2-p)
    for p in (0.0, 0.25, 0.5, 0.75, 1.0):
        peak = critical_radius(p)
        assert disk_measure(peak, p) == pytest.approx(c_threshold(p), rel=1e-14)
        assert disk_measure(peak * 0.99, p) < disk_measure(peak, p)
        assert disk_measure(peak * 1.01, p) < disk_measure(peak, p)
        assert abs(disk_measure_deriv(peak, p)) < 1e-14


def test_roots_match_bisection_oracle():
    p, c = 1.0, 0.3
    m1_ref, m2_ref = bisect_roots(p, c)
    roots = constant_radii(Params(p, c))
    assert roots.m1 == pytest.approx(m1_ref, rel=1e-12)
    assert roots.m2 == pytest.approx(m2_ref, rel=1e-12)


def test_root_residuals_below_contract():
    for p in (0.0, 0.25, 0.5, 0.75):
        c = 0.9 * c_threshold(p)
        roots = constant_radii(Params(p, c))
        assert abs(disk_measure(roots.m1, p) - c) < 1e-12
        assert abs(disk_measure(roots.m2, p) - c) < 1e-12


def test_counting_around_the_fold():
    for p in (0.0, 0.25, 0.5, 0.75):
        cp = c_threshold(p)
        assert count_constant_solutions(Params(p, 0.9 * cp)) == 2
        assert count_constant_solutions(Params(p, cp)) == 1
        assert count_constant_solutions(Params(p, 1.1 * cp)) == 0


def test_tangency_returns_degenerate_pair():
    p = 0.5
    roots = constant_radii(Params(p, c_threshold(p)))
    assert roots.m1 == pytest.approx(critical_radius(p), rel=1e-6)
    assert roots.m2 == pytest.approx(critical_radius(p), rel=1e-6)


def test_no_roots_beyond_the_fold():
    with pytest.raises(NoRootsError):
        constant_radii(Params(0.5, 1.2 * c_threshold(0.5)))


def test_potential_deriv_matches_finite_difference():
    params = Params(0.5, 0.2)
    ts = np.linspace(0.3, 2.5, 9)
    eps = 1e-6
    fd = (potential(ts + eps, params) - potential(ts - eps, params)) / (2.0 * eps)
    assert np.allclose(potential_deriv(ts, params), fd, rtol=1e-7, atol=1e-9)


def test_potential_p0_log_branch():
    params = Params(0.0, 0.2)
    t = 0.7
    expect = math.exp(-t * t / 2.0) + 0.2 * math.log(t)
    assert potential(t, params) == pytest.approx(expect, rel=1e-15)
    with pytest.raises(ValueError):
        potential(0.0, params)


def test_potential_deriv_sign_splits_at_roots():
    # phi' > 0 below m1 and between-roots behavior: phi' < 0 inside (m1, m2)
    params = Params(0.25, 0.5 * c_threshold(0.25))
    roots = constant_radii(params)
    assert potential_deriv(0.9 * roots.m1, params) > 0.0
    assert potential_deriv(0.5 * (roots.m1 + roots.m2), params) < 0.0
    assert potential_deriv(1.1 * roots.m2, params) > 0.0


def test_params_validation():
    with pytest.raises(ValueError):
        Params(-0.1, 0.3)
    with pytest.raises(ValueError):
        Params(1.5, 0.3)
    with pytest.raises(ValueError):
        Params(0.5, 0.0)


@settings(max_examples=40, deadline=None)
@given(
    p=st.floats(min_value=0.0, max_value=1.0),
    frac=st.floats(min_value=0.05, max_value=0.95),
)
def test_roots_straddle_the_peak(p, frac):
    c = frac * c_threshold(p)
    roots = constant_radii(Params(p, c))
    peak = critical_radius(p)
    assert 0.0 < roots.m1 < peak < roots.m2
    assert abs(disk_measure(roots.m1, p) - c) < 1e-12
    assert abs(disk_measure(roots.m2, p) - c) < 1e-12


@settings(max_examples=25, deadline=None)
@given(
    p=st.floats(min_value=0.0, max_value=1.0),
    frac=st.floats(min_value=0.1, max_value=0.9),
)
def test_oracle_agreement_everywhere(p, frac):
    c = frac * c_threshold(p)
    m1_ref, m2_ref = bisect_roots(p, c)
    roots = constant_radii(Params(p, c))
    assert roots.m1 == pytest.approx(m1_ref, rel=1e-10)
    assert roots.m2 == pytest.approx(m2_ref, rel=1e-10)
