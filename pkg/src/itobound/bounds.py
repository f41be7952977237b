"""Density bounds for d-dimensional Ito processes with unit diffusion.

Each coordinate ``j`` contributes one factor computed from the clipped
distance ``a_j = min(l, |x0_j - x_j|)`` between the start and the evaluation
point. The drift bound ``C`` is the caller's assertion about the process while
it stays in the box ``B_{l,inf}(x)``; nothing here can check it.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from itobound.drbm_kernel import (
    DrbmParams,
    SeriesOptions,
    density_upper_bound,
    transition_density_at_zero,
)
from itobound.density_probe import quadrature
from itobound.errors import DriftBoundZero, InvalidParameters
from itobound.normal_kernel import std_normal_cdf, std_normal_pdf


@dataclass(frozen=True)
class LocalBoundInput:
    """Geometry and constants for the local product bound.

    ``C`` must bound the sup-norm of the drift while the process is in a
    region containing ``B_{l,inf}(x)``.
    """

    x0: tuple[float, ...]
    x: tuple[float, ...]
    t: float
    C: float
    l: float

    def __post_init__(self):
        object.__setattr__(self, "x0", tuple(float(v) for v in np.ravel(self.x0)))
        object.__setattr__(self, "x", tuple(float(v) for v in np.ravel(self.x)))
        if len(self.x0) != len(self.x) or len(self.x) == 0:
            raise InvalidParameters(
                f"x0 and x must be nonempty with equal length, got {len(self.x0)} and {len(self.x)}"
            )
        if not self.t > 0:
            raise InvalidParameters(f"t={self.t} must be > 0")
        if not self.l > 0:
            raise InvalidParameters(f"l={self.l} must be > 0")
        if self.C < 0 or not math.isfinite(self.C):
            raise InvalidParameters(f"C={self.C} must be finite and >= 0")

    @property
    def d(self) -> int:
        return len(self.x)

    def distances(self) -> tuple[float, ...]:
        return tuple(min(self.l, abs(a - b)) for a, b in zip(self.x0, self.x))


@dataclass(frozen=True)
class BoundReport:
    a: tuple[float, ...]
    z: tuple[float, ...]
    factors: tuple[float, ...]
    product: float

    def to_dict(self) -> dict:
        return {
            "a": list(self.a),
            "z": list(self.z),
            "factors": list(self.factors),
            "product": self.product,
        }


@dataclass(frozen=True)
class SharpBound:
    """Series-based bound ``2^-d prod_j p_{l,t}(a_j, 0)`` and its certified error."""

    value: float
    error: float
    densities: tuple[float, ...]


@dataclass(frozen=True)
class GlobalBound:
    value: float
    crude: float
    factors: tuple[float, ...]


@dataclass(frozen=True)
class ScalarFieldSpec:
    """A positive diffusion coefficient with declared bounds on a region.

    ``lipschitz`` bounds ``|sigma'|`` and ``drift_bound`` bounds ``|b|`` on the
    region where the bound is applied.
    """

    sigma: Callable[[float], float]
    sigma_min: float
    sigma_max: float
    lipschitz: float
    drift_bound: float

    def __post_init__(self):
        if not self.sigma_min > 0:
            raise InvalidParameters(f"sigma_min={self.sigma_min} must be > 0")
        if self.sigma_max < self.sigma_min:
            raise InvalidParameters(
                f"sigma_max={self.sigma_max} must be >= sigma_min={self.sigma_min}"
            )
        if self.lipschitz < 0:
            raise InvalidParameters(f"lipschitz={self.lipschitz} must be >= 0")
        if self.drift_bound < 0:
            raise InvalidParameters(f"drift_bound={self.drift_bound} must be >= 0")


def local_density_bound(inp: LocalBoundInput) -> BoundReport:
    """Closed-form product bound on the density of ``X(t)`` at ``x``.

    Every factor is exactly half of
    :func:`itobound.drbm_kernel.density_upper_bound` at ``x := a_j``.
    """
    if inp.C == 0:
        raise DriftBoundZero("drift bound zero: use global_density_bound for C == 0")
    rt = math.sqrt(inp.t)
    a = inp.distances()
    z = tuple(rt * inp.C - aj / rt for aj in a)
    factors = tuple(0.5 * density_upper_bound(DrbmParams(inp.C, inp.l, inp.t, aj)) for aj in a)
    return BoundReport(a=a, z=z, factors=factors, product=math.prod(factors))


def sharp_local_bound(inp: LocalBoundInput, opts: SeriesOptions | None = None) -> SharpBound:
    opts = opts or SeriesOptions()
    results = [
        transition_density_at_zero(DrbmParams(inp.C, inp.l, inp.t, aj), opts)
        for aj in inp.distances()
    ]
    scale = 0.5 ** inp.d
    value = scale * math.prod(r.value for r in results)
    upper = scale * math.prod(r.value + r.tail_bound for r in results)
    return SharpBound(
        value=value,
        error=max(0.0, upper - value),
        densities=tuple(r.value for r in results),
    )


def global_density_bound(
    x0: Sequence[float], x: Sequence[float], t: float, C: float, d: int | None = None
) -> GlobalBound:
    """Bound for drift bounded by ``C`` everywhere: ``prod_j (phi(z_j)/sqrt t + C Phi(z_j))``.

    Also returns the position-free ``(1/sqrt(2 pi t) + C)^d``. ``C == 0`` is
    allowed and gives the heat kernel.
    """
    x0 = np.ravel(np.asarray(x0, dtype=float))
    x = np.ravel(np.asarray(x, dtype=float))
    if d is None:
        d = len(x)
    if len(x0) != d or len(x) != d or d < 1:
        raise InvalidParameters(f"x0, x must both have length d={d}")
    if not t > 0:
        raise InvalidParameters(f"t={t} must be > 0")
    if C < 0:
        raise InvalidParameters(f"C={C} must be >= 0")
    rt = math.sqrt(t)
    factors = []
    for a, b in zip(x0, x):
        zj = rt * C - abs(a - b) / rt
        factors.append(std_normal_pdf(zj) / rt + C * std_normal_cdf(zj))
    crude = (1.0 / math.sqrt(2.0 * math.pi * t) + C) ** d
    return GlobalBound(value=math.prod(factors), crude=crude, factors=tuple(factors))


def lamperti_transform(spec: ScalarFieldSpec, y: float, quad_tol: float = 1e-12) -> float:
    """``F(y) = int_0^y du / sigma(u)`` by adaptive quadrature."""
    if y == 0:
        return 0.0

    def inv_sigma(u):
        s = spec.sigma(u)
        if not s > 0:
            raise InvalidParameters(f"nonpositive sigma: sigma({u}) = {s}")
        return 1.0 / s

    return quadrature(inv_sigma, 0.0, y, tol=quad_tol)


def _check_declared_sigma(spec: ScalarFieldSpec, lo: float, hi: float, n: int = 257) -> None:
    for u in np.linspace(lo, hi, n):
        s = spec.sigma(float(u))
        if not s > 0:
            raise InvalidParameters(f"nonpositive sigma: sigma({u}) = {s}")
        if s < spec.sigma_min * (1 - 1e-12) or s > spec.sigma_max * (1 + 1e-12):
            raise InvalidParameters(
                f"sigma({u}) = {s} outside declared [{spec.sigma_min}, {spec.sigma_max}]"
            )


@dataclass(frozen=True)
class StateDependentBound:
    value: float
    drift_bound: float
    x0: float
    x: float
    half_width: float
    lipschitz_factor: float
    transformed: float


def state_dependent_bound_1d(
    spec: ScalarFieldSpec,
    y0: float,
    y: float,
    t: float,
    region: tuple[float, float],
    quad_tol: float = 1e-12,
) -> StateDependentBound:
    """Density bound for ``dY = b(Y) dt + sigma(Y) dW`` at ``Y(t) = y``.

    Works in Lamperti coordinates ``X = F(Y)``, where the diffusion is one
    and the drift ``b/sigma - sigma'/2`` is bounded by
    ``drift_bound/sigma_min + lipschitz/2`` on ``F(region)``. The bound on
    ``X`` is pulled back with the Lipschitz constant of ``F``, ``1/sigma_min``.
    """
    lo, hi = region
    if not lo < hi:
        raise InvalidParameters(f"region {region} is empty")
    if not (lo <= y <= hi and lo <= y0 <= hi):
        raise InvalidParameters(f"region {region} must contain y={y} and y0={y0}")
    _check_declared_sigma(spec, lo, hi)
    c_a = spec.drift_bound / spec.sigma_min + 0.5 * spec.lipschitz
    fx0 = lamperti_transform(spec, y0, quad_tol)
    fx = lamperti_transform(spec, y, quad_tol)
    f_lo = lamperti_transform(spec, lo, quad_tol)
    f_hi = lamperti_transform(spec, hi, quad_tol)
    half_width = min(fx - f_lo, f_hi - fx)
    lip = 1.0 / spec.sigma_min
    if c_a == 0:
        # Constant sigma and no drift: X is a Brownian motion.
        transformed = global_density_bound([fx0], [fx], t, 0.0).value
    else:
        if not half_width > 0:
            raise InvalidParameters(
                f"region too small: transformed half-width {half_width} at y={y}"
            )
        transformed = local_density_bound(LocalBoundInput((fx0,), (fx,), t, c_a, half_width)).product
    return StateDependentBound(
        value=lip * transformed,
        drift_bound=c_a,
        x0=fx0,
        x=fx,
        half_width=half_width,
        lipschitz_factor=lip,
        transformed=transformed,
    )
