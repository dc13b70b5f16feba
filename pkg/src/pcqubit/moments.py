"""First and second charge moments, propagated without the n-ladder.

Weighting the number-resolved equations by n and n^2 and summing closes on
the reduced density matrix plus six moment fields.  ``n_qq'`` are the
n-weighted and ``n2_qq'`` the n^2-weighted matrix elements; mean charge and
second moment are the sums of their diagonals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _rk4
from .core import QubitState, SystemParams, derive_rates
from .errors import PhysicsError

VARIANCE_TOL = 1e-9


@dataclass(frozen=True)
class MomentState:
    q: QubitState
    m1_11: float = 0.0
    m1_22: float = 0.0
    m1_12: complex = 0j
    m2_11: float = 0.0
    m2_22: float = 0.0
    m2_12: complex = 0j


@dataclass(frozen=True)
class MomentTrajectory:
    times: np.ndarray
    y: np.ndarray  # columns as in moment_generator

    def __len__(self):
        return len(self.times)

    def __getitem__(self, i) -> MomentState:
        r = self.y[i]
        return MomentState(
            q=QubitState(r[0], complex(r[1], r[2])),
            m1_11=r[3], m1_22=r[4], m1_12=complex(r[5], r[6]),
            m2_11=r[7], m2_22=r[8], m2_12=complex(r[9], r[10]),
        )

    @property
    def sigma11(self):
        return self.y[:, 0]

    @property
    def mean(self):
        return self.y[:, 3] + self.y[:, 4]

    @property
    def second_moment(self):
        return self.y[:, 7] + self.y[:, 8]

    @property
    def variance(self):
        return self.second_moment - self.mean ** 2


def moment_generator(p: SystemParams) -> np.ndarray:
    """Generator on the 12-vector

    (s11, Re s12, Im s12, n11, n22, Re n12, Im n12, n2_11, n2_22, Re n2_12, Im n2_12, 1).
    """
    d1, d2, om, eps = p.d1, p.d2, p.omega, p.epsilon
    hg = derive_rates(p).gamma_d / 2
    g = math.sqrt(d1 * d2)
    A = np.zeros((12, 12))
    # reduced qubit, sigma22 = 1 - sigma11
    A[0, 2] = -2 * om
    A[1, 1], A[1, 2] = -hg, -eps
    A[2, 0], A[2, 1], A[2, 2], A[2, 11] = 2 * om, eps, -hg, -om
    # n-weighted
    A[3, 0], A[3, 6] = d1, -2 * om
    A[4, 0], A[4, 11], A[4, 6] = -d2, d2, 2 * om
    A[5, 5], A[5, 6], A[5, 1] = -hg, -eps, g
    A[6, 5], A[6, 3], A[6, 4], A[6, 6], A[6, 2] = eps, om, -om, -hg, g
    # n^2-weighted
    A[7, 3], A[7, 0], A[7, 10] = 2 * d1, d1, -2 * om
    A[8, 4], A[8, 0], A[8, 11], A[8, 10] = 2 * d2, -d2, d2, 2 * om
    A[9, 9], A[9, 10], A[9, 5], A[9, 1] = -hg, -eps, 2 * g, g
    A[10, 9], A[10, 7], A[10, 8], A[10, 10], A[10, 6], A[10, 2] = eps, om, -om, -hg, 2 * g, g
    return A


def evolve_moments(p: SystemParams, q0: QubitState | None = None, t_grid=(0.0, 1.0)) -> MomentTrajectory:
    """Propagate the qubit state and charge moments from zero transferred charge."""
    q0 = QubitState() if q0 is None else q0
    t = _rk4.check_grid(t_grid)
    y0 = np.zeros(12)
    y0[:3] = q0.sigma11, q0.sigma12.real, q0.sigma12.imag
    y0[11] = 1.0
    y = _rk4.propagate(moment_generator(p), y0, t, _rk4.certified_step(p))
    return MomentTrajectory(times=t, y=y)


def mean_and_variance(m: MomentState):
    mean = m.m1_11 + m.m1_22
    var = m.m2_11 + m.m2_22 - mean ** 2
    if var < -VARIANCE_TOL:
        raise PhysicsError(f"negative charge variance {var:.3g}: integrator inconsistency")
    return mean, var


def initial_current(p: SystemParams, q0: QubitState) -> float:
    return p.d2 + (p.d1 - p.d2) * q0.sigma11


def shot_noise_sq(p: SystemParams, q0: QubitState, dts, mode: str = "asymptotic") -> np.ndarray:
    """Squared current dispersion for an array of measurement windows.

    ``asymptotic`` is the small-window form I(0)/dt; ``exact`` is var(dt)/dt^2
    from the moment equations, with the charge counter reset at the window
    start.
    """
    dts = np.asarray(dts, dtype=float)
    if np.any(dts <= 0):
        raise ValueError("measurement window must be > 0 (dispersion diverges at dt = 0)")
    if mode == "asymptotic":
        return initial_current(p, q0) / dts
    if mode != "exact":
        raise ValueError(f"mode must be 'asymptotic' or 'exact', got {mode!r}")
    order = np.argsort(dts)
    grid, inverse = np.unique(dts[order], return_inverse=True)
    traj = evolve_moments(p, q0, np.concatenate([[0.0], grid]))
    var = traj.variance[1:][inverse]
    if var.min() < -VARIANCE_TOL:
        raise PhysicsError(f"negative charge variance {var.min():.3g}: integrator inconsistency")
    out = np.empty_like(dts)
    out[order] = var / dts[order] ** 2
    return out


def current_dispersion(p: SystemParams, q0: QubitState | None, dt: float):
    """Current-estimate dispersion ``(exact, asymptotic)`` for a window ``dt``."""
    q0 = QubitState() if q0 is None else q0
    if dt <= 0:
        raise ValueError("measurement window must be > 0 (dispersion diverges at dt = 0)")
    exact = math.sqrt(max(shot_noise_sq(p, q0, [dt], "exact")[0], 0.0))
    asym = math.sqrt(initial_current(p, q0) / dt)
    return exact, asym
