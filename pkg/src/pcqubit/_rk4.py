"""Fixed-step classical RK4 for the linear, autonomous systems used here.

Every equation in the package is linear with constant coefficients, so one
RK4 step is a fixed matrix ``I + E`` with ``E = z + z^2/2 + z^3/6 + z^4/24``
and ``z = h A``.  ``k`` steps are ``(I + E)^k``, computed by binary powering.
Powers are kept in increment form, ``(I + E)^k = I + E_k``, so the small
per-step change is never rounded against the identity.  The result equals
stepping ``k`` times up to round-off.

The number-resolved hierarchy is block Toeplitz in the electron count n: the
generator is ``B`` on the diagonal and ``C`` on the first sub-diagonal.  Its
RK4 maps are stored as their first block column (``kernel[j]`` couples
n - j to n) and multiplied by truncated block convolution.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .core import SystemParams, derive_rates
from .errors import StepSizeUnderflow

LOCAL_TOL = 1e-12
_MAX_HALVINGS = 60
_MAX_STEPS = 2 ** 62


def ladder_blocks(p: SystemParams):
    """Diagonal and sub-diagonal 4x4 blocks for one rung (p1, p2, Re c, Im c)."""
    d1, d2, om, eps = p.d1, p.d2, p.omega, p.epsilon
    dm = 0.5 * (d1 + d2)
    g = math.sqrt(d1 * d2)
    B = np.array([
        [-d1, 0.0, 0.0, -2 * om],
        [0.0, -d2, 0.0, 2 * om],
        [0.0, 0.0, -dm, -eps],
        [om, -om, eps, -dm],
    ])
    C = np.diag([d1, d2, g, g])
    return B, C


def rk4_increment(A: np.ndarray, h: float) -> np.ndarray:
    z = h * A
    z2 = z @ z
    return z + z2 / 2 + (z2 @ z) / 6 + (z2 @ z2) / 24


def power_increment(E: np.ndarray, k: int) -> np.ndarray:
    """Return ``(I + E)^k - I``."""
    result = np.zeros_like(E)
    base = E
    while k:
        if k & 1:
            result = result + base + result @ base
        k >>= 1
        if k:
            base = 2 * base + base @ base
    return result


def block_conv(X: np.ndarray, Y: np.ndarray, J: int) -> np.ndarray:
    """Truncated product of two block lower-triangular Toeplitz maps."""
    nx, ny = min(len(X), J + 1), min(len(Y), J + 1)
    size = min(nx + ny - 1, J + 1)
    out = np.zeros((size,) + X.shape[1:])
    for i in range(nx):
        m = min(ny, size - i)
        if m <= 0:
            break
        out[i:i + m] += X[i] @ Y[:m]
    return out


def _kernel_add(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if len(X) < len(Y):
        X, Y = Y, X
    out = X.copy()
    out[:len(Y)] += Y
    return out


def ladder_rk4_increment(B: np.ndarray, C: np.ndarray, h: float) -> np.ndarray:
    """One-step RK4 increment kernel, shape (5, 4, 4)."""
    z = np.stack([h * B, h * C])
    total = z.copy()
    term = z
    for m in (2, 3, 4):
        term = block_conv(term, z, m) / m
        total = _kernel_add(total, term)
    return total


def ladder_power_increment(E: np.ndarray, k: int, J: int) -> np.ndarray:
    """Increment kernel of ``k`` steps, truncated to reach ``J``."""
    result = np.zeros((1,) + E.shape[1:])
    base = E[:J + 1]
    while k:
        if k & 1:
            result = _kernel_add(_kernel_add(result, base), block_conv(result, base, J))
        k >>= 1
        if k:
            base = _kernel_add(2 * base, block_conv(base, base, J))
    return result


def _kernel_norm(K: np.ndarray) -> float:
    # induced 1-norm of the full (infinite) Toeplitz operator
    return float(np.abs(K).sum(axis=0).sum(axis=0).max())


@lru_cache(maxsize=256)
def certified_step(p: SystemParams) -> float:
    """Largest step from the rate rule whose RK4 local error is <= ``LOCAL_TOL``.

    Start from ``min(1/(20 omega), 1/(20 |epsilon|), 1/(20 gamma_d), 1/(20 d1))``
    and halve until the Richardson estimate (one step of h against two of
    h/2, on the full number-resolved generator) certifies the tolerance.
    """
    gamma_d = derive_rates(p).gamma_d
    scales = [r for r in (p.omega, abs(p.epsilon), gamma_d, p.d1) if r > 0]
    h = min(1 / (20 * r) for r in scales)
    B, C = ladder_blocks(p)
    for _ in range(_MAX_HALVINGS):
        big = ladder_rk4_increment(B, C, h)
        half = ladder_rk4_increment(B, C, h / 2)
        two_half = _kernel_add(_kernel_add(half, half), block_conv(half, half, 8))
        err = _kernel_norm(_kernel_add(big, -two_half)) * 16 / 15
        if err <= LOCAL_TOL:
            return h
        h /= 2
    raise StepSizeUnderflow(
        f"RK4 local error {err:.3g} > {LOCAL_TOL} at step {h:.3g}", time=0.0)


def check_grid(t_grid) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or len(t) < 1:
        raise ValueError("time grid must be a non-empty 1-D sequence")
    if t[0] != 0:
        raise ValueError(f"time grid must start at 0, got {t[0]}")
    if not np.all(np.isfinite(t)):
        raise ValueError("time grid must be finite")
    if np.any(np.diff(t) <= 0):
        raise ValueError("time grid must be strictly increasing")
    return t


def steps_for(interval: float, h: float, time: float) -> int:
    k = max(1, math.ceil(interval / h * (1 - 1e-12)))
    if k > _MAX_STEPS:
        raise StepSizeUnderflow(
            f"{interval:.3g} time units need more than 2^62 steps of {h:.3g}", time=time)
    return k


def propagate(A: np.ndarray, y0: np.ndarray, times: np.ndarray, h: float) -> np.ndarray:
    """RK4 solution of ``y' = A y`` at each time; the step never exceeds ``h``."""
    out = np.empty((len(times), len(y0)), dtype=np.result_type(A, y0))
    out[0] = y0
    cache = {}
    y = np.asarray(y0)
    for i in range(1, len(times)):
        dt = times[i] - times[i - 1]
        k = steps_for(dt, h, times[i])
        key = (dt, k)
        if key not in cache:
            cache[key] = power_increment(rk4_increment(A, dt / k), k)
        y = y + cache[key] @ y
        out[i] = y
    return out
