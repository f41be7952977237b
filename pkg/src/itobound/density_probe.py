"""Oracles and estimators used to check the bounds.

The empirical density at a point is the hit frequency of the open sup-norm
ball ``B_{eps,inf}(x)`` divided by its volume ``(2 eps)^d``, i.e. the
quotient whose ``eps -> 0`` limsup defines the density version the bounds
are stated for. At fixed ``eps`` it is a biased (ball-averaged) estimator.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from itobound.drbm_kernel import (
    DrbmParams,
    SeriesOptions,
    summand_f,
    summand_g,
    transition_density_at_zero,
)
from itobound.errors import InsufficientSamples, InvalidParameters, NoConvergence
from itobound.normal_kernel import (
    SQRT_2PI,
    exp_times_gaussian_tail,
    stable_exp_times_cdf_deficit,
    std_normal_pdf,
)

MIN_HISTOGRAM_SAMPLES = 10_000


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    std_error: float
    epsilon: float
    n: int
    hits: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "std_error": self.std_error,
            "epsilon": self.epsilon,
            "n": self.n,
            "hits": self.hits,
        }


def empirical_density_at(samples, x, epsilon: float) -> DensityEstimate:
    """Sup-norm ball quotient ``#{|s - x|_inf < eps} / (n (2 eps)^d)``.

    ``samples`` is ``(n,)`` for scalar processes or ``(n, d)``.
    """
    if not epsilon > 0:
        raise InvalidParameters(f"epsilon={epsilon} must be > 0")
    s = np.asarray(samples, dtype=float)
    if s.ndim == 1:
        s = s[:, None]
    n, d = s.shape
    if n == 0:
        raise InsufficientSamples("empty samples")
    x = np.broadcast_to(np.asarray(x, dtype=float).ravel(), (d,))
    hits = int(np.count_nonzero(np.all(np.abs(s - x) < epsilon, axis=1)))
    vol = (2.0 * epsilon) ** d
    p_hat = hits / n
    return DensityEstimate(
        value=hits / (n * vol),
        std_error=math.sqrt(p_hat * (1.0 - p_hat) / n) / vol,
        epsilon=float(epsilon),
        n=n,
        hits=hits,
    )


def quadrature(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10, limit: int = 500) -> float:
    """Adaptive Gauss-Kronrod quadrature (QUADPACK) with absolute tolerance ``tol``.

    Infinite limits are mapped to a finite interval by QUADPACK's own
    substitution. Raises :class:`NoConvergence` when the error estimate
    cannot be brought under ``tol`` within ``limit`` subdivisions.
    """
    out = integrate.quad(f, a, b, epsabs=tol, epsrel=0.0, limit=limit, full_output=1)
    val, err = out[0], out[1]
    if len(out) == 4 and err > tol:
        raise NoConvergence(f"no convergence: quadrature error {err:.3g} > tol {tol:.3g} ({out[3]!r})")
    return float(val)


def _check_ab(a: float, b: float) -> None:
    if not a > 0:
        raise InvalidParameters(f"domain error: a={a} must be > 0")
    if b < 0:
        raise InvalidParameters(f"domain error: b={b} must be >= 0")


def normal_expectation_cos(a: float, b: float) -> float:
    """``E[a^2 cos(bZ) / (a^2 + Z^2)]`` for standard normal ``Z``, in closed form.

    Written as ``a sqrt(2 pi) / 2 * e^{-b^2/2} [S(a - b) + S(a + b)]`` with
    ``S(u) = e^{u^2/2}(1 - Phi(u))``, which never forms ``e^{a^2/2}`` on its own.
    """
    _check_ab(a, b)
    return 0.5 * a * SQRT_2PI * (exp_times_gaussian_tail(b, a - b) + exp_times_gaussian_tail(b, a + b))


def normal_expectation_sin(a: float, b: float) -> float:
    """``E[Z sin(bZ) / (a^2 + Z^2)]``, same rearrangement as the cosine case."""
    _check_ab(a, b)
    return -0.5 * SQRT_2PI * (exp_times_gaussian_tail(b, a + b) - exp_times_gaussian_tail(b, a - b))


def integral_identity_rhs(p: DrbmParams) -> float:
    """Closed form of ``2 int_0^inf [f - g](z) dz``."""
    C, t, x = p.C, p.t, p.x
    rt = math.sqrt(t)
    gauss = math.sqrt(2.0 * math.pi / t) * math.exp(-x * x / (2.0 * t))
    return gauss + 2.0 * math.pi * C * stable_exp_times_cdf_deficit(-C * x + 0.5 * t * C * C, rt * C - x / rt)


def verify_integral_identity(p: DrbmParams, tol: float = 1e-12) -> float:
    """``|2 int_0^inf (f - g) dz - closed form|`` with the integral done by quadrature."""

    def integrand(z):
        return float(summand_f(z, p.t, p.x, p.C) - summand_g(z, p.t, p.x, p.C))

    lhs = 2.0 * quadrature(integrand, 0.0, math.inf, tol=tol)
    return abs(lhs - integral_identity_rhs(p))


@dataclass(frozen=True)
class HistogramCheck:
    """Standardized bin deviations ``(observed - expected) / sqrt(n q (1 - q))``."""

    mode: str
    n: int
    edges: np.ndarray = field(repr=False)
    observed: np.ndarray = field(repr=False)
    expected: np.ndarray = field(repr=False)
    deviations: np.ndarray = field(repr=False)

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.deviations)))

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "edges": self.edges.tolist(),
            "observed": self.observed.tolist(),
            "expected": self.expected.tolist(),
            "deviations": self.deviations.tolist(),
            "max_deviation": self.max_deviation,
        }


def stationary_bin_probabilities(C: float, l: float, edges) -> np.ndarray:
    """Exact bin masses of the truncated exponential ``2C e^{-2Cy} / (1 - e^{-2Cl})``."""
    edges = np.asarray(edges, dtype=float)
    if C == 0:
        return np.diff(edges) / l
    # (e^{-2Ca} - e^{-2Cb}) / (1 - e^{-2Cl}), written with expm1 to keep small bins accurate
    lo, hi = edges[:-1], edges[1:]
    return np.exp(-2.0 * C * lo) * -np.expm1(-2.0 * C * (hi - lo)) / -np.expm1(-2.0 * C * l)


def histogram_vs_density(
    samples,
    p: DrbmParams,
    n_bins: int,
    mode: str = "boundary",
    opts: SeriesOptions | None = None,
) -> HistogramCheck:
    """Compare DRBM terminal samples on ``[0, l]`` against known densities.

    ``mode="boundary"`` checks only the bin ``[0, w)``, ``w = l/n_bins``,
    against ``p_{l,t}(x, 0) w (1 - C w)``. The slope term comes from the
    zero-flux wall condition ``p'(0) = -2C p(0)``; the remaining error is
    ``O(w^3)`` in the bin mass.
    ``mode="stationary"`` checks every bin against the stationary law.
    """
    s = np.asarray(samples, dtype=float).ravel()
    n = s.size
    if n < MIN_HISTOGRAM_SAMPLES:
        raise InsufficientSamples(f"insufficient samples: {n} < {MIN_HISTOGRAM_SAMPLES}")
    if n_bins < 1:
        raise InvalidParameters(f"n_bins={n_bins} must be >= 1")
    edges = np.linspace(0.0, p.l, n_bins + 1)
    counts = np.histogram(s, bins=edges)[0].astype(float)
    if mode == "boundary":
        width = edges[1] - edges[0]
        q = np.array([transition_density_at_zero(p, opts).value * width * (1.0 - p.C * width)])
        obs = counts[:1]
        edges = edges[:2]
    elif mode == "stationary":
        q = stationary_bin_probabilities(p.C, p.l, edges)
        obs = counts
    else:
        raise InvalidParameters(f"mode must be 'boundary' or 'stationary', got {mode!r}")
    expected = n * q
    dev = (obs - expected) / np.sqrt(n * q * (1.0 - q))
    return HistogramCheck(mode=mode, n=n, edges=edges, observed=obs, expected=expected, deviations=dev)


def gaussian_density(x, mean, var: float) -> float:
    """Density of ``N(mean, var I_d)`` at ``x``; used as an exact oracle."""
    x = np.ravel(np.asarray(x, dtype=float))
    mean = np.ravel(np.asarray(mean, dtype=float))
    sd = math.sqrt(var)
    return math.prod(std_normal_pdf((xi - mi) / sd) / sd for xi, mi in zip(x, mean))
