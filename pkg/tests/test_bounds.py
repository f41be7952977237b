import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from itobound.bounds import (
    LocalBoundInput,
    ScalarFieldSpec,
    global_density_bound,
    lamperti_transform,
    local_density_bound,
    sharp_local_bound,
    state_dependent_bound_1d,
)
from itobound.drbm_kernel import DrbmParams, SeriesOptions, density_upper_bound, stationary_density_at_zero
from itobound.errors import DriftBoundZero, InvalidParameters
from itobound.normal_kernel import std_normal_cdf, std_normal_pdf


def phi(z):
    return math.exp(-z * z / 2) / math.sqrt(2 * math.pi)


def Phi(z):
    return 0.5 * math.erfc(-z / math.sqrt(2))


def four_term_factor(C, l, t, a):
    z = math.sqrt(t) * C - a / math.sqrt(t)
    return (
        C * math.exp(-2 * C * l) / (1 - math.exp(-2 * C * l))
        + phi(z) / math.sqrt(t)
        + C * Phi(z)
        + math.exp(C * a - C * C * t / 2) * (3 + a * C) ** 2 / (l * t * C * C)
    )


@pytest.mark.parametrize("C,l,t", [(0.5, 1.0, 0.25), (1.0, 2.0, 1.0), (2.0, 0.5, 4.0)])
def test_factor_matches_written_formula(C, l, t):
    x0 = (0.0, 0.3, -1.7)
    x = (0.0, 0.1, 0.0)
    rep = local_density_bound(LocalBoundInput(x0, x, t, C, l))
    for aj, zj, fj in zip(rep.a, rep.z, rep.factors):
        assert zj == pytest.approx(math.sqrt(t) * C - aj / math.sqrt(t), rel=1e-15, abs=1e-15)
        assert fj == pytest.approx(four_term_factor(C, l, t, aj), rel=1e-12)
        assert fj > 0
    assert rep.product == math.prod(rep.factors)


def test_factor_identity_is_bitwise():
    for C in (0.5, 1, 2):
        for l in (0.5, 1, 2):
            for t in (0.25, 1, 4):
                rep = local_density_bound(LocalBoundInput((0.0,), (0.4,), t, C, l))
                aj = rep.a[0]
                assert rep.factors[0] == 0.5 * density_upper_bound(DrbmParams(C, l, t, aj))


def test_clipping():
    rep = local_density_bound(LocalBoundInput((0.0, 0.0), (0.3, 5.0), 1.0, 1.0, 1.0))
    assert rep.a == (0.3, 1.0)


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=4), st.floats(0.01, 5))
def test_clipping_property(xs, l):
    x0 = tuple(0.5 * v for v in xs)
    inp = LocalBoundInput(x0, tuple(xs), 1.0, 1.0, l)
    for a, u, v in zip(inp.distances(), x0, xs):
        assert a <= l
        if abs(u - v) <= l:
            assert a == abs(u - v)


def test_a_zero_example():
    C, l, t = 1.3, 0.8, 0.6
    rep = local_density_bound(LocalBoundInput((0.2,), (0.2,), t, C, l))
    expect = (
        C * math.exp(-2 * C * l) / (1 - math.exp(-2 * C * l))
        + phi(math.sqrt(t) * C) / math.sqrt(t)
        + C * Phi(math.sqrt(t) * C)
        + 9 * math.exp(-C * C * t / 2) / (l * t * C * C)
    )
    assert rep.product == pytest.approx(expect, rel=1e-13)


def test_large_l_tends_to_global_factor():
    a, C, t = 0.5, 1.0, 1.0
    g = global_density_bound([0.0], [a], t, C).value
    diffs = [local_density_bound(LocalBoundInput((0.0,), (a,), t, C, l)).product - g for l in (1e2, 1e3, 1e4, 1e6)]
    assert all(d > 0 for d in diffs)
    assert all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:]))
    assert diffs[-1] < 1.3e-5
    # the last term decays only like 1/l
    last = math.exp(C * a - C * C * t / 2) * (3 + a * C) ** 2 / (1e3 * t * C * C)
    assert diffs[1] == pytest.approx(last, rel=1e-6)


def test_zero_drift_rejected():
    with pytest.raises(DriftBoundZero, match="drift bound zero"):
        local_density_bound(LocalBoundInput((0.0,), (0.0,), 1.0, 0.0, 1.0))


def test_input_validation():
    for args in [((0.0,), (0.0, 1.0), 1, 1, 1), ((), (), 1, 1, 1), ((0.0,), (0.0,), 0, 1, 1),
                 ((0.0,), (0.0,), 1, 1, -1), ((0.0,), (0.0,), 1, -1, 1)]:
        with pytest.raises(InvalidParameters):
            LocalBoundInput(*args)


@pytest.mark.parametrize("C", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("l", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("t", [0.25, 1.0, 4.0])
def test_sharp_below_closed_form(C, l, t):
    for x in ((0.0, 0.0), (0.3, -0.2), (1.0, 3.0)):
        inp = LocalBoundInput((0.0, 0.0), x, t, C, l)
        s = sharp_local_bound(inp)
        assert s.value <= local_density_bound(inp).product + s.error


def test_sharp_product_structure():
    inp1 = LocalBoundInput((0.0,), (0.4,), 0.5, 1.0, 1.0)
    inp2 = LocalBoundInput((0.0, 1.0), (0.4, 0.6), 0.5, 1.0, 1.0)
    p = sharp_local_bound(inp1).densities[0]
    assert sharp_local_bound(inp2).value == pytest.approx(p * p / 4, rel=1e-15)


def test_sharp_stationary_limit():
    C, l = 1.5, 0.7
    inp = LocalBoundInput((0.0, 0.0), (0.1, 0.5), 1e5, C, l)
    s = sharp_local_bound(inp, SeriesOptions(tail_tol=1e-13))
    expect = (C / -math.expm1(-2 * C * l)) ** 2
    assert s.value == pytest.approx(expect, rel=1e-12)
    assert expect == pytest.approx((stationary_density_at_zero(C, l) / 2) ** 2, rel=1e-14)


def test_global_examples():
    g = global_density_bound([0.0], [0.0], 1.0, 0.0)
    assert g.value == pytest.approx(0.3989422804014327, rel=1e-15)
    for x, t in [(0.5, 1.0), (2.0, 0.3), (-1.0, 4.0)]:
        g = global_density_bound([0.3], [x], t, 0.0)
        assert g.value == pytest.approx(phi(abs(0.3 - x) / math.sqrt(t)) / math.sqrt(t), rel=1e-14)
    one = global_density_bound([0.0], [0.7], 0.5, 1.2).value
    three = global_density_bound([0.0, 1.0, 2.0], [0.7, 0.3, 2.7], 0.5, 1.2).value
    assert three == pytest.approx(one**3, rel=1e-14)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=3), st.floats(0.01, 10), st.floats(0, 5))
def test_global_below_crude(xs, t, C):
    g = global_density_bound([0.0] * len(xs), xs, t, C)
    assert g.value <= g.crude * (1 + 1e-12)


def test_global_validation():
    with pytest.raises(InvalidParameters):
        global_density_bound([0.0], [0.0, 1.0], 1.0, 1.0)
    with pytest.raises(InvalidParameters):
        global_density_bound([0.0], [0.0], 0.0, 1.0)


def _spec(sigma, lo, hi, lip=0.0, drift=0.0):
    return ScalarFieldSpec(sigma, lo, hi, lip, drift)


def test_lamperti_examples():
    one = _spec(lambda u: 1.0, 1.0, 1.0)
    two = _spec(lambda u: 2.0, 2.0, 2.0)
    quad = _spec(lambda u: 1 + u * u, 1.0, 26.0)
    for y in (-3.0, -0.5, 0.0, 0.7, 5.0):
        assert lamperti_transform(one, y) == pytest.approx(y, abs=1e-14)
        assert lamperti_transform(two, y) == pytest.approx(y / 2, abs=1e-14)
        assert abs(lamperti_transform(quad, y) - math.atan(y)) <= 1e-10


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_lamperti_strictly_increasing(a, b):
    spec = _spec(lambda u: 2 + math.sin(u), 1.0, 3.0, 1.0)
    if a == b:
        return
    lo, hi = min(a, b), max(a, b)
    assert lamperti_transform(spec, lo) < lamperti_transform(spec, hi)


def test_lamperti_nonpositive_sigma():
    with pytest.raises(InvalidParameters, match="nonpositive sigma"):
        lamperti_transform(_spec(lambda u: u - 0.5, 1.0, 1.0), 1.0)


def test_state_dependent_identity_reduces_to_local():
    spec = _spec(lambda u: 1.0, 1.0, 1.0, 0.0, 0.8)
    r = state_dependent_bound_1d(spec, 0.2, 0.5, 0.7, (-1.0, 3.0))
    direct = local_density_bound(LocalBoundInput((0.2,), (0.5,), 0.7, 0.8, 1.5)).product
    assert r.lipschitz_factor == 1.0
    assert r.half_width == pytest.approx(1.5, abs=1e-14)
    assert r.value == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("y", [-1.0, 0.0, 0.5, 2.0])
def test_state_dependent_constant_sigma_dominates_exact(y):
    spec = _spec(lambda u: 2.0, 2.0, 2.0)
    t, y0 = 0.5, 0.0
    r = state_dependent_bound_1d(spec, y0, y, t, (-10.0, 10.0))
    exact = phi((y - y0) / (2 * math.sqrt(t))) / (2 * math.sqrt(t))
    assert r.drift_bound == 0
    assert r.value >= exact * (1 - 1e-12)


def test_state_dependent_small_half_width_scale():
    spec = _spec(lambda u: 2 + math.sin(u), 1.0, 3.0, 1.0, 0.0)
    r = state_dependent_bound_1d(spec, 0.0, 0.5, 0.5, (-5.0, 5.0))
    assert r.drift_bound == pytest.approx(0.5)
    assert r.lipschitz_factor == pytest.approx(1.0)
    assert r.half_width > 0


def test_state_dependent_errors():
    spec = _spec(lambda u: 2 + math.sin(u), 1.0, 3.0, 1.0, 0.5)
    with pytest.raises(InvalidParameters, match="must contain"):
        state_dependent_bound_1d(spec, 0.0, 6.0, 0.5, (-5.0, 5.0))
    with pytest.raises(InvalidParameters, match="empty"):
        state_dependent_bound_1d(spec, 0.0, 0.0, 0.5, (1.0, 1.0))
    with pytest.raises(InvalidParameters, match="region too small"):
        state_dependent_bound_1d(spec, 0.0, 5.0, 0.5, (-5.0, 5.0))
    bad = _spec(lambda u: 1 + u, 0.5, 2.0, 1.0, 0.0)
    with pytest.raises(InvalidParameters, match="nonpositive sigma"):
        state_dependent_bound_1d(bad, 0.0, 0.0, 0.5, (-2.0, 1.0))
    wrong = _spec(lambda u: 2 + math.sin(u), 1.5, 3.0, 1.0, 0.0)
    with pytest.raises(InvalidParameters, match="outside declared"):
        state_dependent_bound_1d(wrong, 0.0, 0.0, 0.5, (-5.0, 5.0))
    with pytest.raises(InvalidParameters):
        ScalarFieldSpec(lambda u: 1.0, 0.0, 1.0, 0.0, 0.0)
    with pytest.raises(InvalidParameters):
        ScalarFieldSpec(lambda u: 1.0, 2.0, 1.0, 0.0, 0.0)


def test_normal_kernel_used_consistently():
    assert std_normal_pdf(0.3) == pytest.approx(phi(0.3), rel=1e-15)
    assert std_normal_cdf(-0.3) == pytest.approx(Phi(-0.3), rel=1e-15)
