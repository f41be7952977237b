"""Scalar Gaussian building blocks.

Every quantity the bounds need reduces to the standard normal density,
its distribution function, and products of the form ``exp(c) * (Phi(z) - 1)``
where ``exp(c)`` may be astronomically large while ``1 - Phi(z)`` is tiny.
The latter are routed through the scaled Gaussian tail
``exp(a**2 / 2) * (1 - Phi(a))``, which stays O(1/a) for large ``a``.
"""

from __future__ import annotations

import math
import sys

SQRT_2PI = math.sqrt(2.0 * math.pi)
INV_SQRT_2PI = 1.0 / SQRT_2PI
_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Phi is reported as exactly 0 / 1 beyond this point.
CDF_SATURATION = 40.0

# Above this argument the Mills ratio continued fraction replaces erfc;
# below it exp(a**2/2) * erfc(...) loses at most ~a**2 ulps.
_CF_SWITCH = 8.0
_MAX_EXP = math.log(sys.float_info.max)


def std_normal_pdf(z: float) -> float:
    return INV_SQRT_2PI * math.exp(-0.5 * z * z)


def std_normal_cdf(z: float) -> float:
    """Standard normal distribution function, saturating beyond |z| > 40."""
    if z > CDF_SATURATION:
        return 1.0
    if z < -CDF_SATURATION:
        return 0.0
    return 0.5 * math.erfc(-z * _INV_SQRT2)


def std_normal_sf(z: float) -> float:
    """``1 - Phi(z)`` without cancellation for positive ``z``."""
    if z > CDF_SATURATION:
        return 0.0
    if z < -CDF_SATURATION:
        return 1.0
    return 0.5 * math.erfc(z * _INV_SQRT2)


def _mills_ratio_cf(a: float) -> float:
    # (1 - Phi(a)) / phi(a) = 1 / (a + 1/(a + 2/(a + 3/(a + ...)))), modified Lentz.
    tiny = 1e-300
    f = a
    c = f
    d = 0.0
    for n in range(1, 1000):
        d = a + n * d
        d = 1.0 / (d if d != 0.0 else tiny)
        c = a + n / c
        if c == 0.0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-17:
            return 1.0 / f
    raise ArithmeticError(f"Mills ratio continued fraction did not converge at a={a}")


def scaled_gaussian_tail(a: float) -> float:
    """Return ``exp(a**2 / 2) * (1 - Phi(a))``.

    Finite for every ``a >= -37``; for large positive ``a`` it behaves like
    ``1 / (a * sqrt(2*pi))``. Very negative ``a`` overflows (OverflowError),
    which is the honest answer there.
    """
    if a > _CF_SWITCH:
        return _mills_ratio_cf(a) * INV_SQRT_2PI
    return math.exp(0.5 * a * a) * 0.5 * math.erfc(a * _INV_SQRT2)


def _checked_exp(x: float) -> float:
    if x > _MAX_EXP:
        raise OverflowError(f"exp({x}) is not representable")
    return math.exp(x)


def stable_exp_times_cdf_deficit(c: float, z: float) -> float:
    """Return ``exp(c) * (Phi(z) - 1)``, which is always <= 0.

    For ``z >= 0`` this is evaluated as ``-exp(c - z**2/2) * scaled_gaussian_tail(z)``
    so it never overflows while ``c - z**2/2`` is moderate, even when ``exp(c)``
    alone would. Raises OverflowError when the result itself is out of range.
    """
    if z < 0.0:
        return -_checked_exp(c) * std_normal_sf(z)
    expo = c - 0.5 * z * z
    tail = scaled_gaussian_tail(z)
    if expo < 700.0:
        return -math.exp(expo) * tail
    return -_checked_exp(expo + math.log(tail))


def exp_times_gaussian_tail(b: float, x: float) -> float:
    """Return ``exp(-b**2/2) * scaled_gaussian_tail(x)``.

    This combination appears in the closed-form normal expectations; for
    negative ``x`` the two exponents are merged before exponentiating.
    """
    if x >= 0.0:
        return math.exp(-0.5 * b * b) * scaled_gaussian_tail(x)
    return _checked_exp(0.5 * (x * x - b * b)) * std_normal_sf(x)
