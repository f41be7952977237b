"""Counter-based normal variates.

Each standard normal is a pure function of ``(seed, path, stream, step)``.
The Philox4x32-10 block cipher (Salmon et al., Random123) encrypts the
counter ``(step // 2, stream << 8 | attempt, path_lo, path_hi)`` under the
64-bit key ``seed``; each 64-bit half of the output block feeds one
ziggurat draw (128 layers, Doornik's layout) for step ``2*(step//2) + half``.
Rejected draws take fresh blocks through the 8-bit attempt field. Any path,
step or stream can therefore be regenerated on its own, and how the work is
split across threads cannot change a single bit.
"""

from __future__ import annotations

import math

import numba as nb
import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint32(0x9E3779B9)
_W1 = np.uint32(0xBB67AE85)
_LO32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)

MAX_STREAMS = 1 << 24
MAX_STEPS = 1 << 32


def split_seed(seed: int) -> tuple[np.uint32, np.uint32]:
    seed = int(seed)
    if not 0 <= seed < 1 << 64:
        raise ValueError(f"seed={seed} must be an unsigned 64-bit integer")
    return np.uint32(seed & 0xFFFFFFFF), np.uint32(seed >> 32)


@nb.njit(inline="always", cache=True)
def philox4x32(c0, c1, c2, c3, k0, k1):
    for _ in range(10):
        p0 = np.uint64(c0) * _M0
        p1 = np.uint64(c2) * _M1
        n0 = np.uint32(p1 >> _S32) ^ c1 ^ k0
        n1 = np.uint32(p1 & _LO32)
        n2 = np.uint32(p0 >> _S32) ^ c3 ^ k1
        n3 = np.uint32(p0 & _LO32)
        c0, c1, c2, c3 = n0, n1, n2, n3
        k0 = np.uint32(k0 + _W0)
        k1 = np.uint32(k1 + _W1)
    return c0, c1, c2, c3


def _ziggurat_tables(n: int = 128, r: float = 3.442619855899, v: float = 9.91256303526217e-3):
    x = np.empty(n + 1)
    f = math.exp(-0.5 * r * r)
    x[0] = v / f
    x[1] = r
    for i in range(2, n):
        x[i] = math.sqrt(-2.0 * math.log(v / x[i - 1] + math.exp(-0.5 * x[i - 1] ** 2)))
    x[n] = 0.0
    ratio = x[1:] / x[:-1]
    return x, ratio


ZIG_X, ZIG_R = _ziggurat_tables()
ZIG_TAIL = float(ZIG_X[1])

_INV53 = 1.0 / 9007199254740992.0
_INV32 = 1.0 / 4294967296.0


@nb.njit(inline="always", cache=True)
def _u53(hi, lo):
    # uniform in [0, 1) from bits 11..63 of the 64-bit word (hi, lo);
    # bits 0..6 pick the ziggurat layer, so the two never overlap
    return (np.float64(hi) * 2097152.0 + np.float64(lo >> np.uint32(11))) * _INV53


@nb.njit(inline="always", cache=True)
def _u32_open(a):
    # uniform in (0, 1)
    return (np.float64(a) + 0.5) * _INV32


@nb.njit(inline="always", cache=True)
def _wedge_accept(i, x, u01):
    f0 = math.exp(-0.5 * (ZIG_X[i] * ZIG_X[i] - x * x))
    f1 = math.exp(-0.5 * (ZIG_X[i + 1] * ZIG_X[i + 1] - x * x))
    return f1 + u01 * (f0 - f1) < 1.0


@nb.njit(cache=True)
def _zig_slow(k0, k1, c0, base, c2, c3, half, i, u):
    # The first attempt (layer i, abscissa u) missed its rectangle. Every
    # further uniform comes from retry blocks with attempt field 1 + 2r + half,
    # disjoint between the two halves of a pair.
    r = 0
    while r < 127:
        w0, w1, w2, w3 = philox4x32(c0, base | np.uint32(1 + 2 * r + half), c2, c3, k0, k1)
        r += 1
        if i == 0:
            # Marsaglia's tail beyond ZIG_TAIL
            xt = math.log(_u32_open(w0)) / ZIG_TAIL
            yt = math.log(_u32_open(w1))
            if -2.0 * yt >= xt * xt:
                return xt - ZIG_TAIL if u < 0.0 else ZIG_TAIL - xt
            continue
        x = u * ZIG_X[i]
        if _wedge_accept(i, x, _u32_open(w0)):
            return x
        # fresh attempt from the rest of this block
        i = np.int64(w2 & np.uint32(0x7F))
        u = 2.0 * _u53(w3, w2) - 1.0
        if abs(u) < ZIG_R[i]:
            return u * ZIG_X[i]
    return 0.0  # not reached in practice (probability far below 1e-200)


@nb.njit(inline="always", cache=True)
def _zig(k0, k1, c0, base, c2, c3, half, lo, hi):
    i = np.int64(lo & np.uint32(0x7F))
    u = 2.0 * _u53(hi, lo) - 1.0
    if abs(u) < ZIG_R[i]:
        return u * ZIG_X[i]
    return _zig_slow(k0, k1, c0, base, c2, c3, half, i, u)


@nb.njit(inline="always", cache=True)
def normal_pair(k0, k1, path, stream, pair):
    """Normals for steps ``2*pair`` and ``2*pair + 1`` of one ``(path, stream)``."""
    c2 = np.uint32(np.uint64(path) & _LO32)
    c3 = np.uint32(np.uint64(path) >> _S32)
    c0 = np.uint32(pair)
    base = np.uint32(stream) << np.uint32(8)
    w0, w1, w2, w3 = philox4x32(c0, base, c2, c3, k0, k1)
    z0 = _zig(k0, k1, c0, base, c2, c3, 0, w0, w1)
    z1 = _zig(k0, k1, c0, base, c2, c3, 1, w2, w3)
    return z0, z1


@nb.njit(cache=True)
def normal_at(k0, k1, path, stream, step):
    """Standard normal for one ``(path, stream, step)`` counter."""
    z0, z1 = normal_pair(k0, k1, path, stream, np.uint64(step) >> np.uint64(1))
    return z1 if step & 1 else z0


@nb.njit(cache=True, nogil=True)
def fill_normals(k0, k1, path_start, n_paths, stream, step_start, n_steps, out):
    for i in range(n_paths):
        path = path_start + i
        k = 0
        step = step_start
        if step & 1 and n_steps > 0:
            out[i, 0] = normal_at(k0, k1, path, stream, step)
            k = 1
            step += 1
        while k + 1 < n_steps:
            z0, z1 = normal_pair(k0, k1, path, stream, step >> 1)
            out[i, k] = z0
            out[i, k + 1] = z1
            k += 2
            step += 2
        if k < n_steps:
            out[i, k] = normal_at(k0, k1, path, stream, step)


def normals(seed: int, paths, stream: int = 0, steps=range(1)) -> np.ndarray:
    """Array of normals indexed ``[path, step]`` for contiguous ranges.

    ``paths`` and ``steps`` are ``range`` objects with unit stride.
    """
    k0, k1 = split_seed(seed)
    if not 0 <= stream < MAX_STREAMS:
        raise ValueError(f"stream={stream} outside [0, {MAX_STREAMS})")
    out = np.empty((len(paths), len(steps)))
    fill_normals(k0, k1, paths.start, len(paths), stream, steps.start, len(steps), out)
    return out
