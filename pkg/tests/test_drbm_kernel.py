import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itobound.density_probe import quadrature
from itobound.drbm_kernel import (
    DrbmParams,
    SeriesOptions,
    density_upper_bound,
    density_upper_bound_simple,
    derivative_envelope,
    euler_maclaurin_error_F,
    integral_I,
    series_sum,
    series_tail_bound,
    stationary_density_at_zero,
    summand_f,
    summand_g,
    transition_density_at_zero,
)
from itobound.errors import DriftBoundZero, InvalidParameters, NoConvergence

from oracles import drbm_density_at_zero_fd, reflected_bm_density_at_zero, summands_mp


def test_summands_dual_implementation():
    for z, t, x, C in [(1.0, 1.0, math.pi, 1.0), (2.0, 0.5, 0.3, 1.0), (7.3, 0.1, 0.9, 2.5)]:
        f_ref, g_ref = summands_mp(z, t, x, C)
        assert float(summand_f(z, t, x, C)) == pytest.approx(f_ref, rel=1e-14, abs=1e-300)
        assert float(summand_g(z, t, x, C)) == pytest.approx(g_ref, rel=1e-14, abs=1e-300)


def test_summand_trivial_values():
    assert summand_f(0.0, 1.0, 0.4, 1.0) == 0.0
    assert summand_g(0.0, 1.0, 0.4, 1.0) == 0.0
    z = np.linspace(0, 20, 101)
    assert np.all(summand_g(z, 0.7, 0.0, 1.3) == 0.0)
    fz = summand_f(z[1:], 0.7, 0.0, 1.3)
    assert np.all((fz > 0) & (fz < 1))


@given(st.floats(0, 50), st.floats(0.01, 5), st.floats(0, 3), st.floats(0.01, 10))
def test_summand_envelopes(z, t, x, C):
    e = math.exp(-t * z * z / 2)
    g = float(summand_g(z, t, x, C))
    f = float(summand_f(z, t, x, C))
    assert abs(g) <= 0.5 * e * (1 + 1e-12)
    assert abs(f - g) <= 1.5 * e * (1 + 1e-12)


def test_params_validation():
    for bad in [(-1, 1, 1, 0), (1, 0, 1, 0), (1, 1, 0, 0), (1, 1, 1, -0.1), (1, 1, 1, 1.5), (1, 1, math.nan, 0)]:
        with pytest.raises(InvalidParameters, match="invalid params"):
            DrbmParams(*bad)
    with pytest.raises(InvalidParameters):
        SeriesOptions(tail_tol=0)
    with pytest.raises(InvalidParameters):
        SeriesOptions(n_max=0)


def test_stationary_limit():
    p = DrbmParams(1.0, 1.0, 1e6, 0.3)
    r = transition_density_at_zero(p, SeriesOptions(tail_tol=1e-9))
    assert abs(r.value - 2 / (1 - math.exp(-2))) <= 1e-9


@pytest.mark.parametrize("t", [100.0, 250.0, 1e3])
@pytest.mark.parametrize("C,l,x", [(0.5, 2.0, 1.0), (1.0, 1.0, 0.3), (2.0, 0.5, 0.5)])
def test_large_t_envelope(C, l, x, t):
    p = DrbmParams(C, l, t, x)
    opts = SeriesOptions(tail_tol=1e-10)
    r = transition_density_at_zero(p, opts)
    env = (2 / l) * math.exp(C * x - C * C * t / 2) * series_tail_bound(0, p)
    assert abs(r.value - stationary_density_at_zero(C, l)) <= opts.tail_tol + env


def test_boundary_start_dominates_interior_start():
    a = transition_density_at_zero(DrbmParams(1, 1, 0.5, 0.0))
    b = transition_density_at_zero(DrbmParams(1, 1, 0.5, 0.7))
    assert a.value >= b.value


@pytest.mark.parametrize("C,l,t", [(1.0, 1.0, 0.5), (2.0, 0.5, 0.1), (0.5, 2.0, 1.0), (1.0, 1.0, 0.02)])
def test_boundary_maximum_on_grid(C, l, t):
    p0 = transition_density_at_zero(DrbmParams(C, l, t, 0.0))
    for x in np.linspace(0, l, 50):
        r = transition_density_at_zero(DrbmParams(C, l, t, float(x)))
        assert r.value <= p0.value + r.tail_bound + p0.tail_bound


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 5), st.floats(0.2, 3), st.floats(1e-3, 5), st.floats(0, 1))
def test_nonnegative_up_to_tail(C, l, t, frac):
    r = transition_density_at_zero(DrbmParams(C, l, t, frac * l))
    assert r.value + r.tail_bound >= 0
    assert r.value - r.tail_bound >= -1e-10


def test_zero_drift_matches_images():
    for l, t, x in [(1.0, 0.5, 0.3), (2.0, 0.1, 1.5), (0.5, 2.0, 0.0), (1.0, 0.01, 0.05)]:
        r = transition_density_at_zero(DrbmParams(0.0, l, t, x), SeriesOptions(tail_tol=1e-12))
        assert r.value == pytest.approx(reflected_bm_density_at_zero(l, t, x), abs=1e-11)


@pytest.mark.parametrize(
    "C,l,t,x", [(1.0, 1.0, 0.5, 0.3), (2.0, 1.0, 0.25, 0.5), (0.5, 2.0, 1.0, 1.0), (1.0, 1.0, 0.05, 0.0)]
)
def test_positive_drift_matches_generator_oracle(C, l, t, x):
    ref = drbm_density_at_zero_fd(C, l, t, x)
    assert transition_density_at_zero(DrbmParams(C, l, t, x)).value == pytest.approx(ref, abs=1e-7)


def test_tail_bound_certifies_partial_sums():
    p = DrbmParams(1.0, 1.0, 0.05, 0.4)
    z = np.arange(1, 4 * 40 + 1) * math.pi / p.l
    terms = summand_f(z, p.t, p.x, p.C) - summand_g(z, p.t, p.x, p.C)
    for N in (1, 5, 10, 20, 40):
        diff = abs(math.fsum(terms[N : 4 * N]))
        assert series_tail_bound(N, p) >= diff
    bounds = [series_tail_bound(N, p) for N in range(0, 200, 10)]
    assert all(a >= b for a, b in zip(bounds, bounds[1:]))
    assert bounds[-1] < 1e-100


def test_tail_bound_at_zero_terms():
    p = DrbmParams(1.0, 1.0, 1.0, 0.0)
    b0 = series_tail_bound(0, p)
    assert b0 == pytest.approx(1.5 / math.pi * math.sqrt(2 * math.pi) * 0.5, rel=1e-15)
    z = np.arange(1, 100_001) * math.pi
    assert b0 >= abs(math.fsum(summand_f(z, 1.0, 0.0, 1.0) - summand_g(z, 1.0, 0.0, 1.0)))


def test_halving_tolerance_stays_within_previous_tail():
    p = DrbmParams(1.5, 1.0, 0.02, 0.2)
    prev = transition_density_at_zero(p, SeriesOptions(tail_tol=1e-4))
    for k in range(1, 12):
        cur = transition_density_at_zero(p, SeriesOptions(tail_tol=1e-4 / 2**k))
        assert abs(cur.value - prev.value) <= prev.tail_bound
        assert cur.tail_bound <= 1e-4 / 2**k
        prev = cur


def test_small_t_is_slow_but_works():
    r = transition_density_at_zero(DrbmParams(1.0, 1.0, 1e-4, 0.5))
    assert r.n_terms > 100
    assert abs(r.value) <= 1e-9


def test_no_convergence():
    with pytest.raises(NoConvergence, match="no convergence"):
        transition_density_at_zero(DrbmParams(1.0, 1.0, 1e-6, 0.5), SeriesOptions(n_max=10))


def test_integral_I_examples():
    assert integral_I(DrbmParams(1e-8, 1.0, 1.0, 0.0)) == pytest.approx(2 / math.sqrt(2 * math.pi), rel=1e-7)
    C, t = 1.0, 0.5
    x = t * C
    p = DrbmParams(C, 1.0, t, x)
    expect = 2 / math.sqrt(2 * math.pi * t) * math.exp(-x * x / (2 * t)) - C * math.exp(-C * x + t * C * C / 2)
    assert integral_I(p) == pytest.approx(expect, rel=1e-14)


@pytest.mark.parametrize("l", [0.7, 1.0, 3.0])
def test_integral_I_quadrature(l):
    p = DrbmParams(1.0, l, 1.0, 0.5)

    def h(z):
        u = z * math.pi / l
        return float(summand_f(u, p.t, p.x, p.C) - summand_g(u, p.t, p.x, p.C))

    q = (2 / l) * quadrature(h, 0.0, math.inf, tol=1e-13)
    assert abs(integral_I(p) - q) <= 1e-8 * abs(q)


def test_integral_I_large_tC2():
    v = integral_I(DrbmParams(30.0, 1.0, 4.0, 0.5))
    assert math.isfinite(v)


def test_F_values():
    assert euler_maclaurin_error_F(DrbmParams(1, 1, 1, 0)) == 18
    assert euler_maclaurin_error_F(DrbmParams(1, 2, 1, 2)) == pytest.approx(25)
    assert euler_maclaurin_error_F(DrbmParams(1.3, 4, 0.7, 0.5)) == pytest.approx(
        euler_maclaurin_error_F(DrbmParams(1.3, 2, 0.7, 0.5)) / 2, rel=1e-15
    )
    with pytest.raises(DriftBoundZero, match="drift bound zero"):
        euler_maclaurin_error_F(DrbmParams(0, 1, 1, 0))


def test_envelope_values():
    p = DrbmParams(1, 1, 1, 0)
    assert derivative_envelope(0.0, p) == 0.0
    assert derivative_envelope(1.0, p) == pytest.approx(5 * math.exp(-0.5), rel=1e-15)


@pytest.mark.parametrize("C,l,t,x", [(0.5, 1, 0.25, 0.5), (1, 2, 1, 1), (2, 0.5, 4, 0.5), (1, 1, 0.1, 0)])
def test_envelope_integral_below_F(C, l, t, x):
    p = DrbmParams(C, l, t, x)
    q = quadrature(lambda z: float(derivative_envelope(z, p)), 0.0, math.inf, tol=1e-10)
    assert (2 / l) * q <= euler_maclaurin_error_F(p)


@pytest.mark.parametrize("C", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("l", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0])
def test_bound_dominates_series(C, l, t):
    for x in (0.0, l / 4, l / 2, l):
        p = DrbmParams(C, l, t, x)
        r = transition_density_at_zero(p)
        ub = density_upper_bound(p)
        assert ub >= r.value - r.tail_bound
        assert density_upper_bound_simple(p) >= ub


def test_bound_first_term_vanishes_for_large_l():
    a = density_upper_bound(DrbmParams(1.0, 1e6, 1.0, 0.5))
    assert math.isfinite(a)
    first = 2.0 * math.exp(-2.0 * 50) / -math.expm1(-2.0 * 50)
    assert first < 1e-40


def test_bound_rejects_zero_drift():
    with pytest.raises(DriftBoundZero):
        density_upper_bound(DrbmParams(0, 1, 1, 0))
    with pytest.raises(DriftBoundZero):
        derivative_envelope(1.0, DrbmParams(0, 1, 1, 0))


def test_series_sum_sandwich_example():
    p = DrbmParams(1.0, 1.0, 0.5, 0.3)
    s = series_sum(p)
    i_val, f_val = integral_I(p), euler_maclaurin_error_F(p)
    assert i_val - f_val - s.tail_bound <= s.value <= i_val + f_val + s.tail_bound
