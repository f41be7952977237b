"""Seeded Monte Carlo: Euler-Maruyama for unit-diffusion Ito processes,
reflected Brownian motion on ``[0, l]``, and the coupled pair used to test
the pathwise comparison between the two.

Paths are processed in chunks of ``CHUNK_PATHS``. Chunk boundaries and all
random numbers depend only on the configuration, never on ``threads``, so
results are bitwise reproducible for any thread count. Coordinate ``j``
draws from RNG stream ``stream_offset + j``.
"""

from __future__ import annotations

import hashlib
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from itobound.drbm_kernel import DrbmParams
from itobound.errors import DriftBoundViolation, InvalidParameters
from itobound.rng import MAX_STEPS, MAX_STREAMS, normal_pair, split_seed

CHUNK_PATHS = 4096
MAX_RECORDED_VALUES = 200_000_000
COMPARISON_SLACK_FACTOR = 5.0
_BOUND_RTOL = 1e-12

# drift kinds handled by compiled kernels
_CONSTANT, _BANG_BANG, _RUNNING_MAX, _CUSTOM = 0, 1, 2, -1


@dataclass(frozen=True)
class SimConfig:
    dt: float
    horizon: float
    n_paths: int
    seed: int = 0
    d: int = 1
    record_full_paths: bool = False
    stream_offset: int = 0

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise InvalidParameters(f"dt={self.dt} must be > 0")
        if not (self.horizon > 0 and math.isfinite(self.horizon)):
            raise InvalidParameters(f"horizon={self.horizon} must be > 0")
        ratio = self.horizon / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio) or round(ratio) < 1:
            raise InvalidParameters(
                f"horizon={self.horizon} must be a positive integer multiple of dt={self.dt}"
            )
        if round(ratio) >= 2 * MAX_STEPS:
            raise InvalidParameters(f"too many steps: {round(ratio)}")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise InvalidParameters(f"n_paths={self.n_paths} must be an integer >= 1")
        if not 0 <= int(self.seed) < 1 << 64:
            raise InvalidParameters(f"seed={self.seed} must be an unsigned 64-bit integer")
        if int(self.d) != self.d or self.d < 1:
            raise InvalidParameters(f"d={self.d} must be an integer >= 1")
        if not (0 <= self.stream_offset and self.stream_offset + self.d <= MAX_STREAMS):
            raise InvalidParameters(f"stream_offset={self.stream_offset} out of range")
        if self.record_full_paths:
            size = self.n_paths * (self.n_steps + 1) * self.d
            if size > MAX_RECORDED_VALUES:
                raise InvalidParameters(
                    f"record_full_paths would store {size} values (limit {MAX_RECORDED_VALUES})"
                )

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))

    def to_dict(self) -> dict:
        return {
            "dt": self.dt,
            "horizon": self.horizon,
            "n_paths": int(self.n_paths),
            "seed": int(self.seed),
            "d": int(self.d),
            "record_full_paths": bool(self.record_full_paths),
            "stream_offset": int(self.stream_offset),
        }


@dataclass(frozen=True)
class PathBatch:
    """Terminal values ``(n_paths, d)``; grid paths ``(n_paths, n_steps + 1, d)``
    and the Brownian increments ``(n_paths, n_steps, d)`` when recorded."""

    terminal: np.ndarray
    config: SimConfig
    paths: np.ndarray | None = None
    increments: np.ndarray | None = None

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.config.n_steps + 1) * self.config.dt

    def digest(self) -> str:
        h = hashlib.sha256(np.ascontiguousarray(self.terminal).tobytes())
        for extra in (self.paths, self.increments):
            if extra is not None:
                h.update(np.ascontiguousarray(extra).tobytes())
        return h.hexdigest()


class PathHistory:
    """What a custom drift rule may look at: the path up to the current step."""

    def __init__(self, x0: np.ndarray, path_start: int):
        self.step = 0
        self.time = 0.0
        self.path_start = path_start
        self.x0 = x0.copy()
        self.current = x0.copy()
        self.running_max = x0.copy()
        self.running_min = x0.copy()

    def _advance(self, x: np.ndarray, t: float) -> None:
        self.step += 1
        self.time = t
        self.current = x
        np.maximum(self.running_max, x, out=self.running_max)
        np.minimum(self.running_min, x, out=self.running_min)


DriftRule = Callable[[float, np.ndarray, PathHistory], np.ndarray]


@dataclass(frozen=True)
class DriftModel:
    """Drift ``rule(t, X, history)`` with its declared bound ``C`` on the box ``region``.

    ``rule`` receives the current states of a chunk of paths as an ``(m, d)``
    array and returns drifts of the same shape (or broadcastable to it).
    ``region=None`` means the bound is claimed everywhere.
    """

    name: str
    declared_bound: float
    rule: DriftRule
    region: tuple[tuple[float, ...], tuple[float, ...]] | None = None
    kind: int = _CUSTOM
    params: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if not (self.declared_bound >= 0 and math.isfinite(self.declared_bound)):
            raise InvalidParameters(f"declared_bound={self.declared_bound} must be finite and >= 0")
        if self.region is not None:
            lo, hi = (tuple(float(v) for v in np.ravel(b)) for b in self.region)
            if len(lo) != len(hi) or any(a >= b for a, b in zip(lo, hi)):
                raise InvalidParameters(f"region {self.region} is not a nonempty box")
            object.__setattr__(self, "region", (lo, hi))

    @classmethod
    def zero(cls, C: float = 0.0, region=None) -> DriftModel:
        return cls.constant(0.0, C=C, region=region, name="zero")

    @classmethod
    def constant(cls, c, C: float | None = None, region=None, name: str = "constant") -> DriftModel:
        c_arr = np.atleast_1d(np.asarray(c, dtype=float))
        if C is None:
            C = float(np.max(np.abs(c_arr)))

        def rule(t, x, history):
            return np.broadcast_to(c_arr, x.shape)

        return cls(name, float(C), rule, region, _CONSTANT, tuple(c_arr.tolist()))

    @classmethod
    def bang_bang(cls, center, C: float, region=None) -> DriftModel:
        """``-C sign(X - center)``: pushes every coordinate toward ``center``."""
        ctr = np.atleast_1d(np.asarray(center, dtype=float))

        def rule(t, x, history):
            return -C * np.sign(x - ctr)

        return cls("bang-bang", float(C), rule, region, _BANG_BANG, tuple(ctr.tolist()))

    @classmethod
    def running_max(cls, C: float, region=None) -> DriftModel:
        """``C tanh(max_{s <= t} X_1(s))`` on every coordinate (path dependent)."""

        def rule(t, x, history):
            return np.broadcast_to(C * np.tanh(history.running_max[:, :1]), x.shape)

        return cls("running-max", float(C), rule, region, _RUNNING_MAX, ())

    @classmethod
    def custom(cls, rule: DriftRule, C: float, region=None, name: str = "custom") -> DriftModel:
        return cls(name, float(C), rule, region, _CUSTOM, ())

    def _region_arrays(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        if self.region is None:
            return np.full(d, -np.inf), np.full(d, np.inf)
        lo, hi = (np.asarray(b, dtype=float) for b in self.region)
        if lo.size == 1 and d > 1:
            lo, hi = np.full(d, lo[0]), np.full(d, hi[0])
        if lo.size != d:
            raise InvalidParameters(f"region has dimension {lo.size}, expected {d}")
        return lo, hi

    def _vector_param(self, d: int) -> np.ndarray:
        if self.kind == _RUNNING_MAX:
            return np.zeros(d)
        v = np.asarray(self.params, dtype=float)
        if v.size == 1:
            return np.full(d, v[0])
        if v.size != d:
            raise InvalidParameters(f"{self.name} parameters have dimension {v.size}, expected {d}")
        return v


def fold_reflect(y: float, l: float) -> float:
    """Map ``y`` into ``[0, l]`` by reduction mod ``2l`` and mirroring."""
    if not l > 0:
        raise InvalidParameters(f"l={l} must be > 0")
    r = y % (2.0 * l)
    return r if r <= l else 2.0 * l - r


@nb.njit(inline="always", cache=True)
def _fold(y, l):
    r = y % (2.0 * l)
    return r if r <= l else 2.0 * l - r


# ---------------------------------------------------------------- kernels


@nb.njit(inline="always", cache=True)
def _drift(kind, x, vec, C, rm, j):
    # rm caches C * tanh(running max of X_1); it changes only on new maxima
    if kind == 0:
        return vec[j]
    if kind == 1:
        return -C * np.sign(x[j] - vec[j])
    return rm


@nb.njit(nogil=True, cache=True)
def _em_kernel(kind, vec, C, bound, lo, hi, x0, k0, k1, path_start, n, stream0, n_steps, dt,
               terminal, paths, incs, record):
    # Returns (-1, -1) or the (path, step) of the first drift-bound violation.
    d = x0.size
    sq = math.sqrt(dt)
    x = np.empty(d)
    beta = np.empty(d)
    zb = np.empty((d, 2))
    limit = bound * (1.0 + 1e-12)
    for i in range(n):
        path = path_start + i
        for j in range(d):
            x[j] = x0[j]
        m = x[0]
        rm = C * math.tanh(m)
        if record:
            paths[i, 0, :] = x
        for k in range(n_steps):
            inside = True
            for j in range(d):
                beta[j] = _drift(kind, x, vec, C, rm, j)
                if not (lo[j] < x[j] < hi[j]):
                    inside = False
            if inside:
                for j in range(d):
                    if abs(beta[j]) > limit:
                        return path, k
            if k & 1 == 0:
                for j in range(d):
                    zb[j, 0], zb[j, 1] = normal_pair(k0, k1, path, stream0 + j, k >> 1)
            for j in range(d):
                dw = sq * zb[j, k & 1]
                x[j] = x[j] + beta[j] * dt + dw
                if record:
                    incs[i, k, j] = dw
            if x[0] > m:
                m = x[0]
                rm = C * math.tanh(m)
            if record:
                paths[i, k + 1, :] = x
        terminal[i, :] = x
    return -1, -1


@nb.njit(nogil=True, cache=True)
def _drbm_kernel(C, l, x, k0, k1, path_start, n, stream, n_steps, dt, terminal, paths, incs, record):
    sq = math.sqrt(dt)
    z0 = 0.0
    z1 = 0.0
    for i in range(n):
        path = path_start + i
        z = x
        if record:
            paths[i, 0, 0] = z
        for k in range(n_steps):
            if k & 1 == 0:
                z0, z1 = normal_pair(k0, k1, path, stream, k >> 1)
            dw = sq * (z1 if k & 1 else z0)
            z = _fold(z - C * dt + dw, l)
            if record:
                incs[i, k, 0] = dw
                paths[i, k + 1, 0] = z
        terminal[i, 0] = z
    return -1, -1


@nb.njit(nogil=True, cache=True)
def _coupled_kernel(kind, vec, C_drift, bound, lo, hi, x0, xc, C, l, slack, k0, k1, path_start, n,
                    stream0, n_steps, dt, counts, max_excess, viol_paths):
    d = x0.size
    sq = math.sqrt(dt)
    x = np.empty(d)
    z = np.empty(d)
    beta = np.empty(d)
    sgn = np.empty(d)
    zb = np.empty((d, 2))
    limit = bound * (1.0 + 1e-12)
    for i in range(n):
        path = path_start + i
        for j in range(d):
            x[j] = x0[j]
            z[j] = min(l, abs(x0[j] - xc[j]))
        m = x[0]
        rm = C_drift * math.tanh(m)
        hit = False
        for k in range(n_steps):
            inside = True
            for j in range(d):
                beta[j] = _drift(kind, x, vec, C_drift, rm, j)
                # sign(0) := +1 keeps the driver a Brownian motion
                sgn[j] = 1.0 if x[j] >= xc[j] else -1.0
                if not (lo[j] < x[j] < hi[j]):
                    inside = False
            if inside:
                for j in range(d):
                    if abs(beta[j]) > limit:
                        return path, k
            if k & 1 == 0:
                for j in range(d):
                    zb[j, 0], zb[j, 1] = normal_pair(k0, k1, path, stream0 + j, k >> 1)
            for j in range(d):
                dw = sq * zb[j, k & 1]
                x[j] = x[j] + beta[j] * dt + dw
                z[j] = _fold(z[j] - C * dt + sgn[j] * dw, l)
                excess = z[j] - abs(x[j] - xc[j])
                if excess > max_excess[j]:
                    max_excess[j] = excess
                if excess > slack:
                    counts[j] += 1
                    hit = True
            if x[0] > m:
                m = x[0]
                rm = C_drift * math.tanh(m)
        if hit:
            viol_paths[0] += 1
    return -1, -1


@nb.njit(nogil=True, cache=True)
def _scalar_kernel(alpha, beta_s, gamma, y0, k0, k1, path_start, n, stream, n_steps, dt, terminal):
    sq = math.sqrt(dt)
    z0 = 0.0
    z1 = 0.0
    for i in range(n):
        path = path_start + i
        y = y0
        for k in range(n_steps):
            if k & 1 == 0:
                z0, z1 = normal_pair(k0, k1, path, stream, k >> 1)
            xi = z1 if k & 1 else z0
            y = y + gamma * math.cos(y) * dt + (alpha + beta_s * math.sin(y)) * (sq * xi)
        terminal[i, 0] = y
    return -1, -1


@nb.njit(nogil=True, cache=True)
def _step_normals(k0, k1, path_start, n, stream0, d, step, out):
    for j in range(d):
        for i in range(n):
            z0, z1 = normal_pair(k0, k1, path_start + i, stream0 + j, step >> 1)
            out[i, j] = z1 if step & 1 else z0


# ---------------------------------------------------------------- driver


def _chunks(n_paths: int) -> list[tuple[int, int]]:
    return [(s, min(CHUNK_PATHS, n_paths - s)) for s in range(0, n_paths, CHUNK_PATHS)]


def _run_chunks(work: Callable[[int, int], object], n_paths: int, threads: int) -> list:
    if int(threads) != threads or threads < 1:
        raise InvalidParameters(f"threads={threads} must be an integer >= 1")
    chunks = _chunks(n_paths)
    if threads == 1 or len(chunks) == 1:
        return [work(s, m) for s, m in chunks]
    with ThreadPoolExecutor(max_workers=int(threads)) as pool:
        # map preserves chunk order, so merges below are deterministic
        return list(pool.map(lambda c: work(*c), chunks))


def _raise_first_violation(results, drift: DriftModel) -> None:
    for path, step in results:
        if path >= 0:
            raise DriftBoundViolation(
                f"drift bound violated: model {drift.name!r} exceeds C={drift.declared_bound} "
                f"inside its region on path {path} at step {step}"
            )


def _alloc(cfg: SimConfig):
    n, d, s = cfg.n_paths, cfg.d, cfg.n_steps
    terminal = np.empty((n, d))
    if cfg.record_full_paths:
        return terminal, np.empty((n, s + 1, d)), np.empty((n, s, d))
    dummy = np.empty((1, 1, 1))
    return terminal, dummy, dummy


def _as_point(v, d: int, name: str) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=float)).ravel()
    if a.size == 1 and d > 1:
        a = np.full(d, a[0])
    if a.size != d:
        raise InvalidParameters(f"{name} has dimension {a.size}, expected d={d}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameters(f"{name} must be finite")
    return a


def euler_maruyama(x0, drift: DriftModel, cfg: SimConfig, threads: int = 1) -> PathBatch:
    """``X_{k+1} = X_k + beta_k dt + sqrt(dt) xi_k`` from ``x0``.

    Shipped presets run in compiled kernels; custom rules run step by step
    over each chunk. The declared drift bound is checked on every step
    while ``X_k`` is inside the model's region.
    """
    d = cfg.d
    x0 = _as_point(x0, d, "x0")
    if drift.kind == _CUSTOM:
        return _euler_maruyama_generic(x0, drift, cfg, threads)
    k0, k1 = split_seed(cfg.seed)
    lo, hi = drift._region_arrays(d)
    terminal, paths, incs = _alloc(cfg)
    vec = drift._vector_param(d)

    def work(start, m):
        sl = slice(start, start + m)
        return _em_kernel(
            drift.kind, vec, drift.declared_bound, drift.declared_bound, lo, hi, x0, k0, k1,
            start, m, cfg.stream_offset, cfg.n_steps, cfg.dt, terminal[sl],
            paths[sl] if cfg.record_full_paths else paths,
            incs[sl] if cfg.record_full_paths else incs,
            cfg.record_full_paths,
        )

    _raise_first_violation(_run_chunks(work, cfg.n_paths, threads), drift)
    if cfg.record_full_paths:
        return PathBatch(terminal, cfg, paths, incs)
    return PathBatch(terminal, cfg)


def _euler_maruyama_generic(x0, drift: DriftModel, cfg: SimConfig, threads: int) -> PathBatch:
    d, n_steps, dt = cfg.d, cfg.n_steps, cfg.dt
    sq = math.sqrt(dt)
    k0, k1 = split_seed(cfg.seed)
    lo, hi = drift._region_arrays(d)
    limit = drift.declared_bound * (1.0 + _BOUND_RTOL)
    terminal, paths, incs = _alloc(cfg)

    def work(start, m):
        x = np.tile(x0, (m, 1))
        hist = PathHistory(x, start)
        z = np.empty((m, d))
        if cfg.record_full_paths:
            paths[start:start + m, 0] = x
        for k in range(n_steps):
            beta = np.broadcast_to(np.asarray(drift.rule(k * dt, x, hist), dtype=float), (m, d))
            inside = np.all((lo < x) & (x < hi), axis=1)
            bad = inside & np.any(np.abs(beta) > limit, axis=1)
            if bad.any():
                return start + int(np.argmax(bad)), k
            _step_normals(k0, k1, start, m, cfg.stream_offset, d, k, z)
            dw = sq * z
            x = x + beta * dt + dw
            hist._advance(x, (k + 1) * dt)
            if cfg.record_full_paths:
                incs[start:start + m, k] = dw
                paths[start:start + m, k + 1] = x
        terminal[start:start + m] = x
        return -1, -1

    _raise_first_violation(_run_chunks(work, cfg.n_paths, threads), drift)
    if cfg.record_full_paths:
        return PathBatch(terminal, cfg, paths, incs)
    return PathBatch(terminal, cfg)


def simulate_drbm(p: DrbmParams, cfg: SimConfig, threads: int = 1) -> PathBatch:
    """Reflected BM with drift ``-C`` on ``[0, l]`` from ``p.x``, folded every step.

    ``p.t`` is not used; the horizon comes from ``cfg``.
    """
    if cfg.d != 1:
        raise InvalidParameters(f"simulate_drbm needs d=1, got d={cfg.d}")
    k0, k1 = split_seed(cfg.seed)
    terminal, paths, incs = _alloc(cfg)
    rec = cfg.record_full_paths

    def work(start, m):
        sl = slice(start, start + m)
        return _drbm_kernel(
            p.C, p.l, p.x, k0, k1, start, m, cfg.stream_offset, cfg.n_steps, cfg.dt,
            terminal[sl], paths[sl] if rec else paths, incs[sl] if rec else incs, rec,
        )

    _run_chunks(work, cfg.n_paths, threads)
    return PathBatch(terminal, cfg, paths, incs) if rec else PathBatch(terminal, cfg)


@dataclass(frozen=True)
class ComparisonReport:
    """Grid points where the comparison process exceeds ``|X_j - x_j|`` by more than ``slack``."""

    n_paths: int
    n_steps: int
    d: int
    slack: float
    violations: tuple[int, ...]
    max_excess: tuple[float, ...]
    paths_with_violation: int

    @property
    def total_violations(self) -> int:
        return int(sum(self.violations))

    def to_dict(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "n_steps": self.n_steps,
            "d": self.d,
            "slack": self.slack,
            "violations": list(self.violations),
            "max_excess": list(self.max_excess),
            "paths_with_violation": self.paths_with_violation,
            "total_violations": self.total_violations,
        }


def coupled_comparison(x0, x, drift: DriftModel, C: float, l: float, cfg: SimConfig,
                       threads: int = 1) -> ComparisonReport:
    """Run ``X`` and, per coordinate, the reflected process ``Z_j`` on ``[0, l]``
    with drift ``-C`` driven by ``sign(X_j - x_j) dW_j``, started at
    ``min(l, |x0_j - x_j|)``. Violations are grid times with
    ``Z_j > |X_j - x_j| + 5 sqrt(dt)``.
    """
    if drift.kind == _CUSTOM:
        raise InvalidParameters("coupled_comparison supports the shipped drift presets only")
    if not l > 0:
        raise InvalidParameters(f"l={l} must be > 0")
    if not C >= 0:
        raise InvalidParameters(f"C={C} must be >= 0")
    d = cfg.d
    x0 = _as_point(x0, d, "x0")
    xc = _as_point(x, d, "x")
    vec = drift._vector_param(d)
    lo, hi = drift._region_arrays(d)
    k0, k1 = split_seed(cfg.seed)
    slack = COMPARISON_SLACK_FACTOR * math.sqrt(cfg.dt)
    chunks = _chunks(cfg.n_paths)
    counts = np.zeros((len(chunks), d), dtype=np.int64)
    excess = np.full((len(chunks), d), -np.inf)
    vp = np.zeros((len(chunks), 1), dtype=np.int64)

    def work(start, m):
        c = start // CHUNK_PATHS
        return _coupled_kernel(
            drift.kind, vec, drift.declared_bound, drift.declared_bound, lo, hi, x0, xc, float(C),
            float(l), slack, k0, k1, start, m, cfg.stream_offset, cfg.n_steps, cfg.dt,
            counts[c], excess[c], vp[c],
        )

    _raise_first_violation(_run_chunks(work, cfg.n_paths, threads), drift)
    return ComparisonReport(
        n_paths=cfg.n_paths,
        n_steps=cfg.n_steps,
        d=d,
        slack=slack,
        violations=tuple(int(v) for v in counts.sum(axis=0)),
        max_excess=tuple(float(v) for v in excess.max(axis=0)),
        paths_with_violation=int(vp.sum()),
    )


@dataclass(frozen=True)
class ScalarSDE:
    """``dY = gamma cos(Y) dt + (alpha + beta sin(Y)) dW``, the family used for
    state-dependent diffusion checks. Requires ``alpha > |beta|``."""

    alpha: float
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if not self.alpha > abs(self.beta):
            raise InvalidParameters(
                f"sigma = {self.alpha} + {self.beta} sin(u) must stay positive (alpha > |beta|)"
            )

    def sigma(self, u: float) -> float:
        return self.alpha + self.beta * math.sin(u)

    def drift(self, u: float) -> float:
        return self.gamma * math.cos(u)

    @property
    def sigma_min(self) -> float:
        return self.alpha - abs(self.beta)

    @property
    def sigma_max(self) -> float:
        return self.alpha + abs(self.beta)

    @property
    def sigma_lipschitz(self) -> float:
        return abs(self.beta)

    @property
    def drift_bound(self) -> float:
        return abs(self.gamma)


def euler_maruyama_scalar(y0: float, sde: ScalarSDE, cfg: SimConfig, threads: int = 1) -> PathBatch:
    """Euler-Maruyama for :class:`ScalarSDE`; terminal values only."""
    if cfg.d != 1:
        raise InvalidParameters(f"scalar SDE needs d=1, got d={cfg.d}")
    if cfg.record_full_paths:
        raise InvalidParameters("record_full_paths is not supported for scalar SDE runs")
    k0, k1 = split_seed(cfg.seed)
    terminal = np.empty((cfg.n_paths, 1))

    def work(start, m):
        return _scalar_kernel(
            sde.alpha, sde.beta, sde.gamma, float(y0), k0, k1, start, m, cfg.stream_offset,
            cfg.n_steps, cfg.dt, terminal[start:start + m],
        )

    _run_chunks(work, cfg.n_paths, threads)
    return PathBatch(terminal, cfg)


PRESETS = ("zero", "constant", "bang-bang", "running-max")


def make_preset(name: str, C: float, d: int, center: Sequence[float] | float = 0.0,
                region=None) -> DriftModel:
    """Preset by name: ``zero``, ``constant`` (``+C``), ``bang-bang`` toward
    ``center``, ``running-max``."""
    if name == "zero":
        return DriftModel.zero(C, region)
    if name == "constant":
        return DriftModel.constant(np.full(d, C), C, region)
    if name == "bang-bang":
        return DriftModel.bang_bang(_as_point(center, d, "center"), C, region)
    if name == "running-max":
        return DriftModel.running_max(C, region)
    raise InvalidParameters(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


__all__ = [
    "CHUNK_PATHS",
    "ComparisonReport",
    "DriftModel",
    "PathBatch",
    "PathHistory",
    "PRESETS",
    "ScalarSDE",
    "SimConfig",
    "coupled_comparison",
    "euler_maruyama",
    "euler_maruyama_scalar",
    "fold_reflect",
    "make_preset",
    "simulate_drbm",
]
