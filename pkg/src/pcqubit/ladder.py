"""Number-resolved density matrix and the counting distribution P_n(t).

sigma^(n) is the qubit density matrix conditioned on n electrons having
reached the collector.  Each rung couples only to the rung below it::

    d s11^n/dt = -D1 s11^n + D1 s11^(n-1) + i omega (s12^n - s21^n)
    d s22^n/dt = -D2 s22^n + D2 s22^(n-1) - i omega (s12^n - s21^n)
    d s12^n/dt = i eps s12^n + i omega (s11^n - s22^n)
                 - (D1 + D2)/2 s12^n + sqrt(D1 D2) s12^(n-1)

The ladder is truncated at ``n_max``; whatever would be transferred past it
is booked as ``lost_mass`` and never renormalised away.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats

from . import _rk4
from .core import QubitState, SystemParams
from .errors import AliasingError, TruncationError

LOST_MASS_TOL = 1e-9
NEGATIVE_MASS_TOL = 1e-8
# mean number of transfers per propagation chunk; bounds the kernel reach
_CHUNK_COUNTS = 40.0
_KERNEL_TAIL = 1e-16


@dataclass(frozen=True)
class CountingDistribution:
    probs: np.ndarray

    @property
    def n(self):
        return np.arange(len(self.probs))

    def total(self) -> float:
        return float(self.probs.sum())

    def mean(self) -> float:
        return float(self.n @ self.probs)

    def second_moment(self) -> float:
        return float((self.n ** 2) @ self.probs)

    def variance(self) -> float:
        return self.second_moment() - self.mean() ** 2

    def total_variation(self, other: "CountingDistribution") -> float:
        size = max(len(self.probs), len(other.probs))
        a = np.zeros(size)
        b = np.zeros(size)
        a[:len(self.probs)] = self.probs
        b[:len(other.probs)] = other.probs
        return 0.5 * float(np.abs(a - b).sum())


@dataclass(frozen=True)
class NumberLadder:
    p1: np.ndarray
    p2: np.ndarray
    c: np.ndarray
    lost_mass: float

    @property
    def n_max(self) -> int:
        return len(self.p1) - 1

    def marginal(self) -> QubitState:
        """Qubit state obtained by summing all rungs (the reduced density matrix)."""
        total = float(self.p1.sum() + self.p2.sum())
        return QubitState(float(self.p1.sum()) / total, complex(self.c.sum()) / total)


@dataclass(frozen=True)
class LadderTrajectory:
    times: np.ndarray
    p1: np.ndarray  # (len(times), n_max + 1)
    p2: np.ndarray
    c: np.ndarray
    lost_mass: np.ndarray

    def __len__(self):
        return len(self.times)

    def __getitem__(self, i) -> NumberLadder:
        return NumberLadder(self.p1[i], self.p2[i], self.c[i], float(self.lost_mass[i]))

    @property
    def n_max(self) -> int:
        return self.p1.shape[1] - 1

    def trace(self) -> np.ndarray:
        return self.p1.sum(axis=1) + self.p2.sum(axis=1)


def choose_n_max(p: SystemParams, t: float, tail_eps: float = 1e-12) -> int:
    """Ladder truncation index for evolving up to time ``t``.

    ``ceil(D1 t + 10 sqrt(D1 t + 1) + 10)``, raised if needed until the
    Poisson(D1 t) tail beyond it is below ``tail_eps``.  Counting at the
    larger rate D1 bounds the tail for any qubit dynamics.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if not 0 < tail_eps <= 1e-6:
        raise ValueError("tail_eps must lie in (0, 1e-6]")
    lam = p.d1 * t
    n = math.ceil(lam + 10 * math.sqrt(lam + 1) + 10)
    while stats.poisson.sf(n, lam) >= tail_eps:
        n += max(1, int(math.sqrt(lam + 1)))
    return n


def _reach(mean_count: float, k: int) -> int:
    # one RK4 step moves at most 4 rungs
    lam = mean_count
    J = math.ceil(lam + 10 * math.sqrt(lam + 1) + 10)
    while stats.poisson.sf(J, lam) >= _KERNEL_TAIL:
        J += 1
    return min(J, 4 * k)


class _Chunk:
    """RK4 increment kernel for one propagation chunk, plus its leak rows."""

    def __init__(self, B, C, tau, k, J):
        E = _rk4.ladder_power_increment(_rk4.ladder_rk4_increment(B, C, tau / k), k, J)
        self.E = E
        w_e = E[:, 0, :] + E[:, 1, :]
        # tail[s] = sum_{j >= s} w E_j: trace carried at least s rungs upward
        self.tail = np.cumsum(w_e[::-1], axis=0)[::-1]

    def leak(self, y, n_max):
        J = len(self.E) - 1
        lo = max(0, n_max - J + 1)
        s = n_max - np.arange(lo, n_max + 1) + 1
        return float(np.einsum("ij,ij->", self.tail[s], y[lo:n_max + 1]))

    def apply(self, y, hi, n_max):
        J = len(self.E) - 1
        new_hi = min(n_max, hi + J)
        out = y.copy()
        for j, Ej in enumerate(self.E):
            top = min(hi + j, new_hi)
            if top < j:
                break
            out[j:top + 1] += y[:top + 1 - j] @ Ej.T
        return out, new_hi


def evolve_ladder(p: SystemParams, q0: QubitState | None = None, t_grid=(0.0, 1.0),
                  n_max: int | None = None, tail_eps: float = 1e-12) -> LadderTrajectory:
    """Integrate the truncated number-resolved hierarchy, all charge starting at n = 0.

    Same fixed-step RK4 and certified step as ``evolve_reduced``.  Raises
    ``TruncationError`` once more than 1e-9 of probability has leaked past
    ``n_max``.
    """
    q0 = QubitState() if q0 is None else q0
    t = _rk4.check_grid(t_grid)
    if n_max is None:
        n_max = choose_n_max(p, t[-1], tail_eps)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    h = _rk4.certified_step(p)
    B, C = _rk4.ladder_blocks(p)

    y = np.zeros((n_max + 1, 4))
    y[0] = (q0.sigma11, q0.sigma22, q0.sigma12.real, q0.sigma12.imag)
    out = np.empty((len(t), n_max + 1, 4))
    out[0] = y
    lost = np.zeros(len(t))
    lost_mass = 0.0
    hi = 0
    chunks = {}
    for i in range(1, len(t)):
        dt = t[i] - t[i - 1]
        n_chunks = max(1, math.ceil(p.d1 * dt / _CHUNK_COUNTS))
        tau = dt / n_chunks
        k = _rk4.steps_for(tau, h, t[i])
        J = _reach(p.d1 * tau, k)
        key = (tau, k, J)
        if key not in chunks:
            chunks[key] = _Chunk(B, C, tau, k, J)
        chunk = chunks[key]
        for _ in range(n_chunks):
            if hi + len(chunk.E) - 1 > n_max:
                lost_mass += chunk.leak(y, n_max)
            y, hi = chunk.apply(y, hi, n_max)
        if lost_mass > LOST_MASS_TOL:
            need = choose_n_max(p, t[-1], tail_eps)
            raise TruncationError(
                f"truncation too small: lost mass {lost_mass:.3g} > {LOST_MASS_TOL} by "
                f"t = {t[i]:.6g} with n_max = {n_max}; need n_max >= {need}",
                lost_mass=lost_mass, required_n_max=need)
        out[i] = y
        lost[i] = lost_mass
    return LadderTrajectory(times=t, p1=out[:, :, 0], p2=out[:, :, 1],
                            c=out[:, :, 2] + 1j * out[:, :, 3], lost_mass=lost)


def electron_distribution(ladder: NumberLadder) -> CountingDistribution:
    return CountingDistribution(ladder.p1 + ladder.p2)


def counting_field_generator(p: SystemParams, chi) -> np.ndarray:
    """Generator on (s11, s22, s12, s21) with phase e^{i chi} on every n -> n+1 gain.

    s21(chi) is not conj(s12(chi)) once chi != 0, so it is carried separately.
    """
    chi = np.atleast_1d(np.asarray(chi, dtype=float))
    z = np.exp(1j * chi)
    d1, d2, om, eps = p.d1, p.d2, p.omega, p.epsilon
    dm = 0.5 * (d1 + d2)
    g = math.sqrt(d1 * d2)
    A = np.zeros((len(chi), 4, 4), dtype=complex)
    A[:, 0, 0] = -d1 + d1 * z
    A[:, 0, 2] = 1j * om
    A[:, 0, 3] = -1j * om
    A[:, 1, 1] = -d2 + d2 * z
    A[:, 1, 2] = -1j * om
    A[:, 1, 3] = 1j * om
    A[:, 2, 0] = 1j * om
    A[:, 2, 1] = -1j * om
    A[:, 2, 2] = 1j * eps - dm + g * z
    A[:, 3, 0] = -1j * om
    A[:, 3, 1] = 1j * om
    A[:, 3, 3] = -1j * eps - dm + g * z
    return A


def counting_field_distribution(p: SystemParams, q0: QubitState | None = None, t: float = 1.0,
                                m: int | None = None, tail_eps: float = 1e-12) -> CountingDistribution:
    """P_n(t) by Fourier inversion of the counting-field generating function.

    The generating function at ``chi_k = 2 pi k / m`` is propagated exactly
    with a matrix exponential, then inverted with a DFT.  Returns
    n = 0 .. m/2 - 1.
    """
    q0 = QubitState() if q0 is None else q0
    if t < 0:
        raise ValueError("t must be >= 0")
    need = 2 * (choose_n_max(p, t, tail_eps) + 1)
    if m is None:
        m = 1 << (need - 1).bit_length()
    if m < 2 or m & (m - 1):
        raise ValueError(f"transform size must be a power of two, got {m}")
    if m < need:
        raise AliasingError(f"transform size {m} < {need}: aliasing risk")
    chi = 2 * np.pi * np.arange(m) / m
    x0 = np.array([q0.sigma11, q0.sigma22, q0.sigma12, np.conj(q0.sigma12)], dtype=complex)
    U = linalg.expm(t * counting_field_generator(p, chi))
    gen = (U[:, 0, :] + U[:, 1, :]) @ x0
    probs = (np.fft.fft(gen) / m).real[: m // 2]
    if probs.min() < -NEGATIVE_MASS_TOL:
        raise AliasingError(
            f"negative probability {probs.min():.3g} after inversion: aliasing risk, increase m")
    return CountingDistribution(probs)
