"""Reduced qubit dynamics under continuous monitoring.

Tracing the number-resolved equations over n leaves a Bloch equation in
which the detector only appears through the decoherence rate gamma_d::

    d sigma11/dt = i omega (sigma12 - sigma21)
    d sigma12/dt = i eps sigma12 + i omega (2 sigma11 - 1) - gamma_d/2 sigma12
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _rk4
from .core import QubitState, SystemParams, derive_rates, rabi_frequency


@dataclass(frozen=True)
class QubitTrajectory:
    times: np.ndarray
    sigma11: np.ndarray
    sigma12: np.ndarray

    def __len__(self):
        return len(self.times)

    @property
    def states(self):
        return [QubitState(float(a), complex(b)) for a, b in zip(self.sigma11, self.sigma12)]

    def current(self, p: SystemParams) -> np.ndarray:
        return p.d2 + (p.d1 - p.d2) * self.sigma11


def reduced_generator(p: SystemParams) -> np.ndarray:
    """Generator acting on (sigma11, Re sigma12, Im sigma12, 1)."""
    half_g = derive_rates(p).gamma_d / 2
    om, eps = p.omega, p.epsilon
    return np.array([
        [0.0, 0.0, -2 * om, 0.0],
        [0.0, -half_g, -eps, 0.0],
        [2 * om, eps, -half_g, -om],
        [0.0, 0.0, 0.0, 0.0],
    ])


def evolve_reduced(p: SystemParams, q0: QubitState | None = None, t_grid=(0.0, 1.0)) -> QubitTrajectory:
    """Integrate the reduced qubit equations on ``t_grid`` (which starts at 0).

    Fixed-step RK4; the step is certified by ``_rk4.certified_step`` and
    shrunk further so that it divides every output interval.
    """
    q0 = QubitState() if q0 is None else q0
    t = _rk4.check_grid(t_grid)
    y0 = np.array([q0.sigma11, q0.sigma12.real, q0.sigma12.imag, 1.0])
    y = _rk4.propagate(reduced_generator(p), y0, t, _rk4.certified_step(p))
    return QubitTrajectory(times=t, sigma11=y[:, 0], sigma12=y[:, 1] + 1j * y[:, 2])


def sigma11_aligned_closed(p: SystemParams, t):
    """Closed-form occupation of dot 1 for aligned levels, starting in dot 1.

    ``1/2 [1 + exp(-gamma_d t / 4) (cos w t + eta sin w t)]`` with
    ``eta = gamma_d / (4 w)``; above the critical point cos and sin become
    cosh and sinh of the real splitting.
    """
    if p.epsilon != 0:
        raise ValueError("closed form holds only for aligned levels (epsilon = 0)")
    t = np.asarray(t, dtype=float)
    if p.omega == 0:
        return np.ones_like(t)[()]
    g4 = derive_rates(p).gamma_d / 4
    regime, rate = rabi_frequency(p)
    if regime == "underdamped":
        osc = np.cos(rate * t) + g4 / rate * np.sin(rate * t)
        env = np.exp(-g4 * t) * osc
    elif regime == "overdamped":
        # split into the two real exponentials so large t cannot overflow
        eta = g4 / rate
        env = 0.5 * ((1 + eta) * np.exp((rate - g4) * t) + (1 - eta) * np.exp(-(rate + g4) * t))
    else:
        env = np.exp(-g4 * t) * (1 + g4 * t)
    return (0.5 * (1 + env))[()]


def zeno_sigma11(p: SystemParams, t):
    """Long-time occupation of dot 1 under strong measurement, ``[1 + exp(-8 omega^2 t / gamma_d)] / 2``."""
    gamma_d = derive_rates(p).gamma_d
    if gamma_d <= 0:
        raise ValueError("Zeno formula needs gamma_d > 0")
    t = np.asarray(t, dtype=float)
    return (0.5 * (1 + np.exp(-8 * p.omega ** 2 * t / gamma_d)))[()]


def average_current(p: SystemParams, q: QubitState) -> float:
    return p.d2 + (p.d1 - p.d2) * q.sigma11
