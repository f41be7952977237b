"""Numbered verification checks shared by the CLI and the acceptance tests.

Each check returns a :class:`CheckResult` carrying the measured worst-case
quantity, the tolerance it is held to and enough detail to diagnose a
failure. Monte Carlo checks take a ``scale`` factor on path counts (their
tolerances are in standard errors, so they widen automatically) and record
a digest of every simulated batch for the determinism check.
"""

from __future__ import annotations

import hashlib
import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from itobound.bounds import (
    LocalBoundInput,
    ScalarFieldSpec,
    global_density_bound,
    lamperti_transform,
    local_density_bound,
    state_dependent_bound_1d,
)
from itobound.density_probe import (
    empirical_density_at,
    histogram_vs_density,
    integral_identity_rhs,
    normal_expectation_cos,
    normal_expectation_sin,
    quadrature,
    verify_integral_identity,
)
from itobound.drbm_kernel import (
    DrbmParams,
    SeriesOptions,
    density_upper_bound,
    derivative_envelope,
    euler_maclaurin_error_F,
    integral_I,
    series_sum,
    summand_f,
    summand_g,
    transition_density_at_zero,
)
from itobound.errors import InvalidParameters
from itobound.normal_kernel import std_normal_cdf, std_normal_pdf
from itobound.sde_sim import (
    PRESETS,
    ScalarSDE,
    SimConfig,
    coupled_comparison,
    euler_maruyama,
    euler_maruyama_scalar,
    make_preset,
    simulate_drbm,
)

DEFAULT_SEED = 20240601

C_GRID = (0.5, 1.0, 2.0)
T_GRID = (0.25, 1.0, 4.0)
X_GRID = (0.0, 0.5, 1.0)
L_GRID = (0.5, 1.0, 2.0)


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "seconds": round(self.seconds, 3),
            "details": self.details,
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] criterion {self.criterion:>2} {self.name}: "
            f"measured={self.measured:.6g} tolerance={self.tolerance:.6g} ({self.seconds:.1f}s)"
        )


def _timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def sub_seed(seed: int, tag: str) -> int:
    """Independent 64-bit seed for a named run."""
    h = hashlib.sha256(f"{int(seed)}:{tag}".encode()).digest()
    return int.from_bytes(h[:8], "little")


def _scaled(n: int, scale: float, floor: int) -> int:
    if not scale > 0:
        raise InvalidParameters(f"scale={scale} must be > 0")
    return max(floor, int(round(n * scale)))


def _drbm_grid(with_l: bool):
    for C in C_GRID:
        for t in T_GRID:
            for x in X_GRID:
                if not with_l:
                    yield C, 1.0, t, x
                    continue
                for l in L_GRID:
                    if x <= l:
                        yield C, l, t, x


# ----------------------------------------------------------- identities


def _expectation_oracles(a: float, b: float) -> tuple[float, float]:
    # both integrands are even in z, so integrate over [0, inf) and double
    def cos_integrand(z):
        return a * a * math.cos(b * z) / (a * a + z * z) * std_normal_pdf(z)

    def sin_integrand(z):
        return z * math.sin(b * z) / (a * a + z * z) * std_normal_pdf(z)

    return (
        2.0 * quadrature(cos_integrand, 0.0, math.inf, tol=1e-13),
        2.0 * quadrature(sin_integrand, 0.0, math.inf, tol=1e-13),
    )


@_timed
def check_normal_expectations() -> CheckResult:
    tol = 1e-9
    worst = 0.0
    rows = []
    for a in (0.5, 1.0, 2.0, 5.0):
        for b in (0.0, 0.5, 1.0, 3.0):
            qc, qs = _expectation_oracles(a, b)
            ec = abs(normal_expectation_cos(a, b) - qc)
            es = abs(normal_expectation_sin(a, b) - qs)
            worst = max(worst, ec, es)
            rows.append({"a": a, "b": b, "cos_error": ec, "sin_error": es})
    return CheckResult(1, "normal-expectation closed forms", worst <= tol, worst, tol, {"grid": rows})


@_timed
def check_integral_identity() -> CheckResult:
    tol = 1e-8
    worst = 0.0
    rows = []
    for C, _, t, x in _drbm_grid(with_l=False):
        p = DrbmParams(C, max(1.0, x), t, x)
        rel = verify_integral_identity(p, tol=1e-12) / (1.0 + abs(integral_identity_rhs(p)))
        worst = max(worst, rel)
        rows.append({"C": C, "t": t, "x": x, "relative_residual": rel})
    return CheckResult(2, "integral identity", worst <= tol, worst, tol, {"grid": rows})


@_timed
def check_euler_maclaurin() -> CheckResult:
    """Measured: the largest violation ``max(I - F - S, S - I - F)`` net of the
    certified series tail; passing means it is <= 0."""
    opts = SeriesOptions(tail_tol=1e-10)
    worst = -math.inf
    rows = []
    skipped = []
    for C in C_GRID:
        for t in T_GRID:
            for x in X_GRID:
                for l in L_GRID:
                    if x > l:
                        skipped.append({"C": C, "l": l, "t": t, "x": x})
                        continue
                    p = DrbmParams(C, l, t, x)
                    s = series_sum(p, opts)
                    i_val, f_val = integral_I(p), euler_maclaurin_error_F(p)
                    v = max(i_val - f_val - s.value, s.value - i_val - f_val) - s.tail_bound
                    worst = max(worst, v)
                    rows.append({"C": C, "l": l, "t": t, "x": x, "S": s.value, "I": i_val, "F": f_val,
                                 "tail": s.tail_bound})
    return CheckResult(3, "Euler-Maclaurin sandwich", worst <= 0.0, worst, 0.0,
                       {"grid": rows, "skipped_x_outside_interval": skipped})


def _central_diff(fn, z, h):
    return (fn(z + h) - fn(z - h)) / (2.0 * h)


@_timed
def check_derivative_envelope(n_points: int = 200) -> CheckResult:
    """Measured: ``max (|f'| + |g'|) / envelope`` over the grid; must be <= 1 + 1e-4."""
    h = 1e-6
    worst = 0.0
    rows = []
    for C, _, t, x in _drbm_grid(with_l=False):
        p = DrbmParams(C, max(1.0, x), t, x)
        z = np.linspace(1e-3, 12.0 / math.sqrt(t), n_points)
        fp = _central_diff(lambda u: summand_f(u, t, x, C), z, h)
        gp = _central_diff(lambda u: summand_g(u, t, x, C), z, h)
        env = derivative_envelope(z, p)
        ok = env > 0
        ratio = float(np.max((np.abs(fp) + np.abs(gp))[ok] / env[ok]))
        worst = max(worst, ratio)
        rows.append({"C": C, "t": t, "x": x, "max_ratio": ratio})
    tol = 1.0 + 1e-4
    return CheckResult(4, "derivative envelope", worst <= tol, worst, tol, {"grid": rows})


# ----------------------------------------------------------- dominance


@_timed
def check_bound_dominance() -> CheckResult:
    """Measured: the largest certified excess of the series density over the
    closed-form bound or over its own value at ``x = 0``; must be <= 0."""
    opts = SeriesOptions(tail_tol=1e-10)
    worst = -math.inf
    rows = []
    for C in C_GRID:
        for t in T_GRID:
            for l in L_GRID:
                at0 = transition_density_at_zero(DrbmParams(C, l, t, 0.0), opts)
                for x in (0.0, l / 4, l / 2, l):
                    p = DrbmParams(C, l, t, x)
                    r = transition_density_at_zero(p, opts)
                    ub = density_upper_bound(p)
                    e1 = r.value - r.tail_bound - ub
                    e2 = r.value - r.tail_bound - (at0.value + at0.tail_bound)
                    worst = max(worst, e1, e2)
                    rows.append({"C": C, "l": l, "t": t, "x": x, "series": r.value, "bound": ub,
                                 "series_at_0": at0.value})
    return CheckResult(5, "bound dominance", worst <= 0.0, worst, 0.0, {"grid": rows})


@_timed
def check_global_limit(l: float = 1e3) -> CheckResult:
    """Closed-form local factor at large ``l`` against the global factor.

    The series-based factor ``p_{l,t}(a, 0) / 2`` is reported alongside; it
    converges much faster because the closed form carries an ``O(1/l)`` term.
    """
    tol = 1e-3
    worst = 0.0
    worst_sharp = 0.0
    rows = []
    for a in (0.0, 0.5, 1.0):
        for C in (0.5, 1.0):
            for t in (0.5, 1.0):
                rt = math.sqrt(t)
                z = rt * C - a / rt
                glob = std_normal_pdf(z) / rt + C * std_normal_cdf(z)
                p = DrbmParams(C, l, t, a)
                loc = 0.5 * density_upper_bound(p)
                sharp = 0.5 * transition_density_at_zero(p).value
                worst = max(worst, abs(loc - glob))
                worst_sharp = max(worst_sharp, abs(sharp - glob))
                # l at which the O(1/l) term alone drops to tol
                l_needed = math.exp(C * a - 0.5 * C * C * t) * (3.0 + a * C) ** 2 / (t * C * C * tol)
                rows.append({"a": a, "C": C, "t": t, "local": loc, "global": glob, "series_factor": sharp,
                             "difference": loc - glob, "l_needed_for_tol": l_needed})
    return CheckResult(9, "global-limit consistency", worst <= tol, worst, tol,
                       {"l": l, "grid": rows, "series_factor_max_difference": worst_sharp})


# ----------------------------------------------------------- Monte Carlo


@_timed
def check_drbm_simulation(scale: float = 1.0, threads: int = 1, seed: int = DEFAULT_SEED) -> CheckResult:
    """Boundary bin at ``t = 0.5`` and full stationary histogram at ``t = 20``."""
    tol = 4.0
    n_bins_boundary, n_bins_stationary = 100, 20
    p = DrbmParams(1.0, 1.0, 0.5, 0.3)
    cfg1 = SimConfig(dt=1e-4, horizon=0.5, n_paths=_scaled(1_000_000, scale, 10_000),
                     seed=sub_seed(seed, "drbm-boundary"))
    b1 = simulate_drbm(p, cfg1, threads)
    h1 = histogram_vs_density(b1.terminal, p, n_bins_boundary, mode="boundary")
    cfg2 = SimConfig(dt=5e-4, horizon=20.0, n_paths=_scaled(250_000, scale, 10_000),
                     seed=sub_seed(seed, "drbm-stationary"))
    p_long = DrbmParams(1.0, 1.0, 20.0, 0.3)
    b2 = simulate_drbm(p_long, cfg2, threads)
    h2 = histogram_vs_density(b2.terminal, p_long, n_bins_stationary, mode="stationary")
    in_range = bool(np.all((b1.terminal >= 0) & (b1.terminal <= 1)) and np.all((b2.terminal >= 0) & (b2.terminal <= 1)))
    worst = max(h1.max_deviation, h2.max_deviation)
    return CheckResult(
        6, "DRBM simulator vs kernel", worst <= tol and in_range, worst, tol,
        {
            "boundary": {"config": cfg1.to_dict(), "n_bins": n_bins_boundary,
                         "max_deviation": h1.max_deviation, "observed": h1.observed.tolist(),
                         "expected": h1.expected.tolist()},
            "stationary": {"config": cfg2.to_dict(), "n_bins": n_bins_stationary,
                           "max_deviation": h2.max_deviation, "deviations": h2.deviations.tolist()},
            "samples_in_interval": in_range,
            "digests": [b1.digest(), b2.digest()],
        },
    )


@_timed
def check_pathwise_comparison(scale: float = 1.0, threads: int = 1, seed: int = DEFAULT_SEED) -> CheckResult:
    C, l, horizon = 1.0, 1.0, 0.5
    total = 0
    rows = []
    digests = []
    for name in ("zero", "constant", "bang-bang"):
        for d in (1, 2):
            x0 = np.zeros(d)
            x = np.full(d, 0.25)
            drift = make_preset(name, C, d, center=x)
            cfg = SimConfig(dt=1e-4, horizon=horizon, n_paths=_scaled(10_000, scale, 100), d=d,
                            seed=sub_seed(seed, f"comparison-{name}-{d}"))
            rep = coupled_comparison(x0, x, drift, C, l, cfg, threads)
            total += rep.total_violations
            rows.append({"preset": name, "d": d, **rep.to_dict()})
            digests.append(hashlib.sha256(repr(rep.to_dict()).encode()).hexdigest())
    return CheckResult(7, "pathwise comparison", total == 0, float(total), 0.0,
                       {"runs": rows, "digests": digests})


@_timed
def check_bound_validity(scale: float = 1.0, threads: int = 1, seed: int = DEFAULT_SEED) -> CheckResult:
    """Measured: the largest ``(estimate - 3 SE) / bound`` over presets, points
    and both bounds; must be <= 1."""
    C, l, t, eps = 1.0, 1.0, 0.5, 0.05
    x0 = 0.0
    worst = -math.inf
    rows = []
    digests = []
    for name in PRESETS:
        drift = make_preset(name, C, 1, center=x0)
        cfg = SimConfig(dt=1e-4, horizon=t, n_paths=_scaled(1_000_000, scale, 10_000),
                        seed=sub_seed(seed, f"validity-{name}"))
        batch = euler_maruyama([x0], drift, cfg, threads)
        digests.append(batch.digest())
        for x in (x0, x0 + 0.25, x0 - 0.25):
            est = empirical_density_at(batch.terminal, [x], eps)
            local = local_density_bound(LocalBoundInput((x0,), (x,), t, C, l)).product
            glob = global_density_bound([x0], [x], t, C).value
            lower = est.value - 3.0 * est.std_error
            worst = max(worst, lower / local, lower / glob)
            rows.append({"preset": name, "x": x, **est.to_dict(), "local_bound": local, "global_bound": glob})
    return CheckResult(8, "end-to-end bound validity", worst <= 1.0, worst, 1.0,
                       {"runs": rows, "digests": digests})


@_timed
def check_lamperti(scale: float = 1.0, threads: int = 1, seed: int = DEFAULT_SEED) -> CheckResult:
    """MC density of the state-dependent SDE against the transformed bound
    (ratio ``(estimate - 3 SE) / bound``), plus the arctan transform oracle."""
    t, eps, region, y0 = 0.5, 0.05, (-5.0, 5.0), 0.0
    worst = -math.inf
    rows = []
    digests = []
    for gamma in (0.0, 0.5):
        sde = ScalarSDE(alpha=2.0, beta=1.0, gamma=gamma)
        spec = ScalarFieldSpec(sde.sigma, sde.sigma_min, sde.sigma_max, sde.sigma_lipschitz, sde.drift_bound)
        cfg = SimConfig(dt=1e-3, horizon=t, n_paths=_scaled(1_000_000, scale, 10_000),
                        seed=sub_seed(seed, f"lamperti-{gamma}"))
        batch = euler_maruyama_scalar(y0, sde, cfg, threads)
        digests.append(batch.digest())
        for y in (-1.0, 0.0, 1.0):
            est = empirical_density_at(batch.terminal, [y], eps)
            bound = state_dependent_bound_1d(spec, y0, y, t, region).value
            ratio = (est.value - 3.0 * est.std_error) / bound
            worst = max(worst, ratio)
            rows.append({"gamma": gamma, "y": y, **est.to_dict(), "bound": bound})
    arctan_spec = ScalarFieldSpec(lambda u: 1.0 + u * u, 1.0, 26.0, 10.0, 0.0)
    arctan_err = max(abs(lamperti_transform(arctan_spec, y) - math.atan(y)) for y in np.linspace(-5, 5, 21))
    ok = worst <= 1.0 and arctan_err <= 1e-10
    return CheckResult(10, "state-dependent diffusion", ok, worst, 1.0,
                       {"runs": rows, "arctan_max_error": arctan_err, "digests": digests})


MC_CHECKS: dict[int, Callable[..., CheckResult]] = {
    6: check_drbm_simulation,
    7: check_pathwise_comparison,
    8: check_bound_validity,
    10: check_lamperti,
}


def determinism_from(first: list[CheckResult], second: list[CheckResult], threads_pair: tuple[int, int]) -> CheckResult:
    """Compare the batch digests of two runs of the same Monte Carlo checks."""
    a = {r.criterion: r.details.get("digests", []) for r in first}
    b = {r.criterion: r.details.get("digests", []) for r in second}
    mismatched = sorted(c for c in a if a[c] != b.get(c))
    compared = sum(len(v) for v in a.values())
    res = CheckResult(11, "thread-count determinism", not mismatched and compared > 0, float(len(mismatched)), 0.0,
                      {"threads": list(threads_pair), "batches_compared": compared,
                       "mismatched_criteria": mismatched})
    res.seconds = sum(r.seconds for r in second)
    return res


@_timed
def check_determinism(scale: float = 1.0, threads: int = 8, seed: int = DEFAULT_SEED,
                      reference: list[CheckResult] | None = None) -> CheckResult:
    """Rerun every Monte Carlo check with a different thread count and compare digests."""
    other = 1 if threads != 1 else 8
    if reference is None:
        reference = [fn(scale=scale, threads=threads, seed=seed) for fn in MC_CHECKS.values()]
    rerun = [MC_CHECKS[r.criterion](scale=scale, threads=other, seed=seed) for r in reference]
    return determinism_from(reference, rerun, (threads, other))


SUITES: dict[str, tuple[int, ...]] = {
    "identities": (1, 2, 3, 4),
    "dominance": (5, 9),
    "comparison": (7,),
    "montecarlo": (6, 8, 10, 11),
    "all": tuple(range(1, 12)),
}

DETERMINISTIC_CHECKS: dict[int, Callable[[], CheckResult]] = {
    1: check_normal_expectations,
    2: check_integral_identity,
    3: check_euler_maclaurin,
    4: check_derivative_envelope,
    5: check_bound_dominance,
    9: check_global_limit,
}


def run_suite(suite: str, scale: float = 1.0, threads: int = 1, seed: int = DEFAULT_SEED,
              progress: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    if suite not in SUITES:
        raise KeyError(suite)
    out: list[CheckResult] = []
    mc_done: list[CheckResult] = []
    for c in SUITES[suite]:
        if c in DETERMINISTIC_CHECKS:
            res = DETERMINISTIC_CHECKS[c]()
        elif c in MC_CHECKS:
            res = MC_CHECKS[c](scale=scale, threads=threads, seed=seed)
            mc_done.append(res)
        else:
            # determinism reuses whatever Monte Carlo checks this suite already ran
            res = check_determinism(scale=scale, threads=threads, seed=seed, reference=mc_done or None)
        out.append(res)
        if progress:
            progress(res)
    return out
