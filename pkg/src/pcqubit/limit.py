"""Precision limit of the current measurement.

The current is estimated from the charge accumulated in a window dt.  Two
errors compete: the shot-noise dispersion, which falls like 1/sqrt(dt), and
the back-action drift of the average current caused by the qubit moving
during the window::

    backaction(dt) = delta_D |sigma11(dt) - sigma11(0)|
    total_sq(dt)   = shot(dt)^2 + backaction(dt)^2

``optimize_measurement_time`` minimises ``total_sq`` numerically.
``closed_form_weak`` and ``closed_form_zeno`` are the leading-order
analytic optima for weak and strong decoherence.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import QubitState, SystemParams, derive_rates
from .errors import BracketMissError, DegenerateQubitError
from .moments import shot_noise_sq
from .reduced import evolve_reduced

INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class ErrorCurve:
    dts: np.ndarray
    shot: np.ndarray
    backaction: np.ndarray
    total_sq: np.ndarray
    argmin_dt: float = math.nan
    min_total_sq: float = math.nan


@dataclass(frozen=True)
class PrecisionLimit:
    dt_star: float
    delta2_sq: float
    regime: str  # "weak-distortion" | "zeno"


def _backaction(p, q0, dts):
    dts = np.asarray(dts, dtype=float)
    if np.any(dts < 0):
        raise ValueError("measurement window must be >= 0")
    out = np.zeros_like(dts)
    pos = dts > 0
    if pos.any():
        grid, inverse = np.unique(dts[pos], return_inverse=True)
        traj = evolve_reduced(p, q0, np.concatenate([[0.0], grid]))
        s11 = traj.sigma11[1:][inverse]
        out[pos] = (p.d1 - p.d2) * np.abs(s11 - q0.sigma11)
    return out


def backaction_error(p: SystemParams, q0: QubitState | None = None, dt=1.0):
    """Drift of the average current over the window, ``delta_D |sigma11(dt) - sigma11(0)|``."""
    q0 = QubitState() if q0 is None else q0
    return _backaction(p, q0, dt)[()]


def error_curve(p: SystemParams, q0: QubitState | None, dts, mode: str = "asymptotic") -> ErrorCurve:
    """Shot, back-action and total error sampled on ``dts`` (no optimisation)."""
    q0 = QubitState() if q0 is None else q0
    dts = np.asarray(dts, dtype=float)
    shot = np.sqrt(shot_noise_sq(p, q0, dts, mode))
    back = _backaction(p, q0, dts)
    return ErrorCurve(dts=dts, shot=shot, backaction=back, total_sq=shot ** 2 + back ** 2)


def total_error_sq(p: SystemParams, q0: QubitState | None = None, dt=1.0, mode: str = "asymptotic"):
    """Squared total error: shot dispersion squared plus back-action squared."""
    q0 = QubitState() if q0 is None else q0
    return error_curve(p, q0, np.atleast_1d(dt), mode).total_sq.reshape(np.shape(dt))[()]


def golden_section(f, a, b, rtol=1e-4):
    """Minimise a unimodal ``f`` on [a, b] until the bracket is narrower than rtol * midpoint."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > rtol * 0.5 * (a + b):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def optimize_measurement_time(p: SystemParams, q0: QubitState | None = None, bracket=(1e-3, 1e3),
                              mode: str = "asymptotic", n_scan: int = 200, rtol: float = 1e-4) -> ErrorCurve:
    """Window dt minimising the total error.

    A logarithmic scan of ``n_scan`` points picks the basin, then golden
    section refines it to relative width ``rtol``.  Raises
    ``BracketMissError`` (carrying the curve) if the best scan point is a
    bracket end.
    """
    q0 = QubitState() if q0 is None else q0
    if p.omega == 0:
        raise DegenerateQubitError("static qubit: error decreases monotonically, no finite optimum")
    lo, hi = bracket
    if not 0 < lo < hi:
        raise ValueError("bracket must satisfy 0 < dt_lo < dt_hi")
    dts = np.geomspace(lo, hi, n_scan)
    curve = error_curve(p, q0, dts, mode)
    i = int(np.argmin(curve.total_sq))
    if i == 0 or i == n_scan - 1:
        raise BracketMissError(
            f"error minimum at the bracket edge dt = {dts[i]:.6g}; widen ({lo:g}, {hi:g})",
            curve=_with_optimum(curve, dts[i], curve.total_sq[i]))

    def f(dt):
        return float(total_error_sq(p, q0, dt, mode))

    x, fx = golden_section(f, dts[i - 1], dts[i + 1], rtol)
    if fx > curve.total_sq[i]:
        x, fx = dts[i], curve.total_sq[i]
    return _with_optimum(curve, x, fx)


def _with_optimum(curve, x, fx):
    return ErrorCurve(curve.dts, curve.shot, curve.backaction, curve.total_sq, float(x), float(fx))


def _ratios(p):
    r = derive_rates(p)
    if p.omega == 0:
        raise DegenerateQubitError("omega = 0: closed form is singular")
    return r, r.gamma_d / (8 * p.omega)


def closed_form_weak(p: SystemParams) -> PrecisionLimit:
    """Leading-order optimum for weak qubit distortion (gamma_d / 8 << omega)."""
    r, x = _ratios(p)
    if r.gamma_d == 0:
        raise ValueError("gamma_d = 0: closed form is singular")
    if x > 0.1 * (1 + 1e-9):
        warnings.warn(f"gamma_d/(8 omega) = {x:.3g} > 0.1: outside the weak-distortion regime",
                      stacklevel=2)
    om = p.omega
    dt = (2 * om / r.gamma_d) ** 0.2 / (2 * om)
    d2sq = 2.5 * r.d_mean * om * (r.gamma_d / (2 * om)) ** 0.2
    return PrecisionLimit(dt, d2sq, "weak-distortion")


def closed_form_zeno(p: SystemParams) -> PrecisionLimit:
    """Leading-order optimum for strong decoherence (gamma_d / 8 >> omega)."""
    r, x = _ratios(p)
    if r.gamma_d == 0:
        raise ValueError("gamma_d = 0: closed form is singular")
    if x < 10 * (1 - 1e-9):
        warnings.warn(f"gamma_d/(8 omega) = {x:.3g} < 10: outside the Zeno regime", stacklevel=2)
    om = p.omega
    dt = (r.gamma_d / (2 * om)) ** (1 / 3) / (4 * om)
    d2sq = 6 * r.d_mean * om * (2 * om / r.gamma_d) ** (1 / 3)
    return PrecisionLimit(dt, d2sq, "zeno")


def single_run_visibility(p: SystemParams) -> float:
    """Squared weak-regime limit over the squared signal, ``delta2_sq / delta_D^2``.

    Rabi oscillations can show up in a single run only if this is << 1.
    With gamma_d ~ delta_D^2 / 4D that translates to roughly omega << 2 gamma_d,
    which clashes with the weak-distortion assumption.
    """
    return closed_form_weak(p).delta2_sq / derive_rates(p).delta_d ** 2
