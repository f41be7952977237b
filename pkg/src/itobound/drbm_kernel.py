"""Transition density at the lower boundary of a doubly reflected Brownian
motion with drift ``-C`` on ``[0, l]``, and the closed-form bounds built on it.

The density is the eigenfunction series

    p_{l,t}(x, 0) = 2C / (1 - e^{-2Cl})
                    + e^{Cx - C^2 t/2} (2/l) sum_{n>=1} [f(n pi/l) - g(n pi/l)]

with ``f(z) = z^2 cos(zx) / (C^2 + z^2) e^{-t z^2/2}`` and
``g(z) = C z sin(zx) / (C^2 + z^2) e^{-t z^2/2}``. Because
``|f - g| <= 1.5 e^{-t z^2/2}``, the remainder after N terms is dominated by a
Gaussian tail integral, which gives a rigorous truncation certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from itobound.errors import DriftBoundZero, InvalidParameters, NoConvergence
from itobound.normal_kernel import (
    scaled_gaussian_tail,
    stable_exp_times_cdf_deficit,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_sf,
)


@dataclass(frozen=True)
class DrbmParams:
    """DRBM on ``[0, l]`` with drift ``-C``, observed after time ``t`` from ``x``."""

    C: float
    l: float
    t: float
    x: float

    def __post_init__(self):
        for name in ("C", "l", "t", "x"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidParameters(f"invalid params: {name}={v} is not finite")
        # C == 0 is plain reflected BM; only the C**-2 formulas reject it.
        if self.C < 0:
            raise InvalidParameters(f"invalid params: C={self.C} must be >= 0")
        if self.l <= 0:
            raise InvalidParameters(f"invalid params: l={self.l} must be > 0")
        if self.t <= 0:
            raise InvalidParameters(f"invalid params: t={self.t} must be > 0")
        if not 0.0 <= self.x <= self.l:
            raise InvalidParameters(f"invalid params: x={self.x} must lie in [0, l={self.l}]")


@dataclass(frozen=True)
class SeriesOptions:
    tail_tol: float = 1e-10
    n_max: int = 1_000_000

    def __post_init__(self):
        if not self.tail_tol > 0:
            raise InvalidParameters(f"tail_tol={self.tail_tol} must be > 0")
        if self.n_max < 1:
            raise InvalidParameters(f"n_max={self.n_max} must be >= 1")


@dataclass(frozen=True)
class SeriesResult:
    """Series value with its certified truncation error.

    ``tail_bound`` is expressed in the same units as ``value`` (the
    prefactor ``(2/l) e^{Cx - C^2 t/2}`` is already applied).
    """

    value: float
    n_terms: int
    tail_bound: float


def _require_positive_drift(p: DrbmParams) -> None:
    if p.C == 0:
        raise DriftBoundZero("drift bound zero: formula divides by C**2; use the global bound")


def summand_f(z, t, x, C):
    z = np.asarray(z, dtype=float)
    return z * z * np.cos(z * x) / (C * C + z * z) * np.exp(-0.5 * t * z * z)


def summand_g(z, t, x, C):
    z = np.asarray(z, dtype=float)
    return C * z * np.sin(z * x) / (C * C + z * z) * np.exp(-0.5 * t * z * z)


def stationary_density_at_zero(C: float, l: float) -> float:
    """``2C / (1 - e^{-2Cl})``, the ``t -> infinity`` limit (``1/l`` when C = 0)."""
    if C == 0:
        return 1.0 / l
    return -2.0 * C / math.expm1(-2.0 * C * l)


def series_tail_bound(N: int, p: DrbmParams) -> float:
    """Bound on ``sum_{n>N} |f - g|(n pi / l)`` (raw sum, no prefactor).

    Uses ``|f - g| <= 1.5 e^{-t z^2/2}`` and that the envelope decreases on
    ``z > 0``, so the sum is dominated by
    ``1.5 (l/pi) int_{N pi/l}^inf e^{-t u^2/2} du``.
    """
    if N < 0:
        raise InvalidParameters(f"N={N} must be >= 0")
    a = N * math.pi * math.sqrt(p.t) / p.l
    return 1.5 * (p.l / math.pi) * math.sqrt(2.0 * math.pi / p.t) * std_normal_sf(a)


def _log_tail(N: int, p: DrbmParams, prefactor: bool) -> float:
    # log of (2/l) * series_tail_bound(N, p), times e^{Cx - C^2 t/2} if prefactor.
    a = N * math.pi * math.sqrt(p.t) / p.l
    log_sf = -0.5 * a * a + math.log(scaled_gaussian_tail(a))
    out = math.log(3.0 / math.pi) + 0.5 * math.log(2.0 * math.pi / p.t) + log_sf
    if prefactor:
        out += p.C * p.x - 0.5 * p.C * p.C * p.t
    return out


def _terms_needed(p: DrbmParams, opts: SeriesOptions, prefactor: bool) -> int:
    """Smallest N whose certified tail is <= opts.tail_tol (tail is monotone in N)."""
    target = math.log(opts.tail_tol)

    def too_big(n):
        return _log_tail(n, p, prefactor) > target

    if not too_big(0):
        return 0
    hi = 1
    while too_big(hi):
        if hi >= opts.n_max:
            raise NoConvergence(
                f"no convergence: more than n_max={opts.n_max} terms needed "
                f"for tail_tol={opts.tail_tol}"
            )
        hi = min(2 * hi, opts.n_max)
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if too_big(mid):
            lo = mid
        else:
            hi = mid
    return hi


def _raw_sum(p: DrbmParams, n_terms: int) -> float:
    if n_terms == 0:
        return 0.0
    total = []
    chunk = 65536
    for start in range(1, n_terms + 1, chunk):
        n = np.arange(start, min(start + chunk, n_terms + 1), dtype=float)
        z = n * (math.pi / p.l)
        total.extend((summand_f(z, p.t, p.x, p.C) - summand_g(z, p.t, p.x, p.C)).tolist())
    return math.fsum(total)


def series_sum(p: DrbmParams, opts: SeriesOptions | None = None) -> SeriesResult:
    """Return ``(2/l) sum [f - g](n pi/l)`` without the ``e^{Cx - C^2 t/2}`` prefactor.

    Here ``tail_tol`` certifies the raw sum itself, which is what the
    Euler-Maclaurin sandwich compares against.
    """
    opts = opts or SeriesOptions()
    n_terms = _terms_needed(p, opts, prefactor=False)
    s = _raw_sum(p, n_terms)
    tail = math.exp(_log_tail(n_terms, p, prefactor=False))
    return SeriesResult(value=(2.0 / p.l) * s, n_terms=n_terms, tail_bound=tail)


def transition_density_at_zero(p: DrbmParams, opts: SeriesOptions | None = None) -> SeriesResult:
    """Evaluate ``p_{l,t}(x, 0)`` with a certified truncation error.

    Terms are added in ascending ``n`` until the scaled tail bound drops
    below ``opts.tail_tol``; the terms are summed with ``math.fsum`` since
    they oscillate in sign. Cost grows like ``l / sqrt(t)`` for small ``t``.
    """
    opts = opts or SeriesOptions()
    n_terms = _terms_needed(p, opts, prefactor=True)
    s = _raw_sum(p, n_terms)
    log_pref = p.C * p.x - 0.5 * p.C * p.C * p.t
    pref = (2.0 / p.l) * math.exp(log_pref) if log_pref > -745 else 0.0
    value = stationary_density_at_zero(p.C, p.l) + pref * s
    tail = math.exp(_log_tail(n_terms, p, prefactor=True))
    return SeriesResult(value=value, n_terms=n_terms, tail_bound=tail)


def integral_I(p: DrbmParams) -> float:
    """Integral counterpart ``(2/l) int_0^inf [f - g](z pi/l) dz`` of the series.

    The second term is evaluated through the overflow-safe
    ``exp(c) * (Phi(z) - 1)`` so large ``t C^2`` is harmless.
    """
    C, t, x = p.C, p.t, p.x
    first = 2.0 / math.sqrt(2.0 * math.pi * t) * math.exp(-x * x / (2.0 * t))
    if C == 0:
        return first
    rt = math.sqrt(t)
    second = 2.0 * C * stable_exp_times_cdf_deficit(-C * x + 0.5 * t * C * C, rt * C - x / rt)
    return first + second


def euler_maclaurin_error_F(p: DrbmParams) -> float:
    _require_positive_drift(p)
    return 2.0 * (3.0 + p.x * p.C) ** 2 / (p.l * p.t * p.C * p.C)


def derivative_envelope(z, p: DrbmParams):
    """Pointwise majorant of ``|f'(z)| + |g'(z)|`` for ``z >= 0``."""
    _require_positive_drift(p)
    z = np.asarray(z, dtype=float)
    C, t, x = p.C, p.t, p.x
    poly = 4 * z + x * x * z * C * C + t * z**3 + 3 * C * x * z + t * C * x * z**3
    return poly * np.exp(-0.5 * t * z * z) / (C * C)


def _gaussian_part(p: DrbmParams) -> float:
    rt = math.sqrt(p.t)
    zz = rt * p.C - p.x / rt
    return 2.0 / rt * std_normal_pdf(zz) + 2.0 * p.C * std_normal_cdf(zz)


def _error_part(p: DrbmParams) -> float:
    C, l, t, x = p.C, p.l, p.t, p.x
    return 2.0 * math.exp(C * x - 0.5 * C * C * t) * (3.0 + x * C) ** 2 / (l * t * C * C)


def density_upper_bound(p: DrbmParams) -> float:
    """Closed-form majorant of ``p_{l,t}(x, 0)``.

    ``2C e^{-2Cl}/(1 - e^{-2Cl}) + (2/sqrt t) phi(z) + 2C Phi(z)
    + 2 e^{Cx - C^2 t/2} (3 + xC)^2 / (l t C^2)`` with ``z = sqrt(t) C - x/sqrt(t)``.
    """
    _require_positive_drift(p)
    # 2C / (e^{2Cl} - 1), written so large Cl underflows instead of overflowing
    first = 2.0 * p.C * math.exp(-2.0 * p.C * p.l) / -math.expm1(-2.0 * p.C * p.l)
    return first + _gaussian_part(p) + _error_part(p)


def density_upper_bound_simple(p: DrbmParams) -> float:
    """Coarser form of :func:`density_upper_bound` with ``1/l`` as first term."""
    _require_positive_drift(p)
    return 1.0 / p.l + _gaussian_part(p) + _error_part(p)


__all__ = [
    "DrbmParams",
    "SeriesOptions",
    "SeriesResult",
    "density_upper_bound",
    "density_upper_bound_simple",
    "derivative_envelope",
    "euler_maclaurin_error_F",
    "integral_I",
    "series_sum",
    "series_tail_bound",
    "stationary_density_at_zero",
    "summand_f",
    "summand_g",
    "transition_density_at_zero",
]
