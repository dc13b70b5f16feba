"""Built-in invariant suite run by ``pcqubit validate``.

Each check returns ``(ok, detail)``.  Sizes are kept small so the whole
suite runs in a few seconds.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import stats

from .core import QubitState, SystemParams, derive_rates, rabi_frequency
from .ladder import counting_field_distribution, electron_distribution, evolve_ladder
from .limit import (backaction_error, closed_form_zeno, optimize_measurement_time,
                    single_run_visibility)
from .moments import current_dispersion, evolve_moments
from .reduced import evolve_reduced, sigma11_aligned_closed, zeno_sigma11

_P = SystemParams(omega=1.0, epsilon=0.0, d1=26.0, d2=24.0)


def trace_conservation():
    traj = evolve_ladder(_P, None, np.linspace(0, 2.0, 21))
    err = float(np.abs(traj.trace() + traj.lost_mass - 1).max())
    return err <= 1e-8, f"max |trace + lost - 1| = {err:.2e}"


def marginal_consistency():
    p = SystemParams(omega=0.7, epsilon=0.4, d1=9.0, d2=4.0)
    t = np.linspace(0, 2.0, 11)
    lad = evolve_ladder(p, QubitState(0.8, 0.1 + 0.2j), t)
    red = evolve_reduced(p, QubitState(0.8, 0.1 + 0.2j), t)
    err = max(np.abs(lad.p1.sum(1) - red.sigma11).max(), np.abs(lad.c.sum(1) - red.sigma12).max())
    return err <= 1e-6, f"sup-norm {err:.2e}"


def moment_consistency():
    t = np.linspace(0, 0.5, 6)
    lad = evolve_ladder(_P, None, t)
    mom = evolve_moments(_P, None, t)
    d = electron_distribution(lad[-1])
    err = max(abs(d.mean() / mom.mean[-1] - 1), abs(d.second_moment() / mom.second_moment[-1] - 1))
    return err <= 1e-6, f"relative {err:.2e}"


def poisson_limit():
    p = SystemParams(omega=0.0, epsilon=0.0, d1=1.0, d2=0.5)
    lad = electron_distribution(evolve_ladder(p, None, [0.0, 1.0])[-1]).probs
    orc = counting_field_distribution(p, None, 1.0, 64).probs
    err = 0.0
    for probs in (lad, orc):
        ref = stats.poisson.pmf(np.arange(len(probs)), 1.0)
        err = max(err, float(np.abs(probs - ref).max()))
    return err <= 1e-10, f"sup |P_n - Poisson| = {err:.2e}"


def oracle_equivalence():
    lad = electron_distribution(evolve_ladder(_P, None, [0.0, 0.5])[-1])
    tv = lad.total_variation(counting_field_distribution(_P, None, 0.5))
    return tv <= 1e-7, f"total variation {tv:.2e}"


def aligned_closed_form():
    worst = 0.0
    for p in (_P, SystemParams(omega=1.0, epsilon=0.0, d1=36.0, d2=4.0)):
        t = np.linspace(0, min(20 / derive_rates(p).gamma_d, 50.0), 401)
        worst = max(worst, float(np.abs(evolve_reduced(p, None, t).sigma11
                                        - sigma11_aligned_closed(p, t)).max()))
    return worst <= 1e-8, f"sup deviation {worst:.2e}"


def zeno_localization():
    p = SystemParams.from_decoherence(omega=1.0, gamma_d=80.0, d_mean=100.0)
    g = derive_rates(p).gamma_d
    t = np.linspace(5 / g, 2 * g / 8, 200)
    s = evolve_reduced(p, None, np.concatenate([[0.0], t])).sigma11[1:]
    dev = float(np.abs(s / zeno_sigma11(p, t) - 1).max())
    return dev <= 0.05, f"max relative deviation {dev:.3f}"


def rabi_continuity():
    rates = []
    for s in (1 - 1e-6, 1 + 1e-6):
        p = SystemParams.from_decoherence(omega=1.0, gamma_d=8.0 * s, d_mean=25.0)
        rates.append(rabi_frequency(p).rate)
    return max(rates) <= 1e-2, f"rates {rates[0]:.2e}, {rates[1]:.2e}"


def shot_noise_scaling():
    devs = []
    for k in (2, 3, 4):
        dt = 10.0 ** -k / _P.d1
        exact, _ = current_dispersion(_P, None, dt)
        devs.append(abs(exact * math.sqrt(dt) / math.sqrt(_P.d1) - 1))
    ok = devs[1] <= 0.01 and devs[0] > devs[1] > devs[2]
    return ok, "deviations " + ", ".join(f"{d:.2e}" for d in devs)


def backaction_at_zero():
    val = float(backaction_error(_P, None, 0.0))
    return val == 0.0, f"backaction(0) = {val}"


def zeno_optimum():
    p = SystemParams.from_decoherence(omega=1.0, gamma_d=200.0, d_mean=2e4)
    curve = optimize_measurement_time(p)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ref = closed_form_zeno(p)
    rel = abs(curve.argmin_dt / ref.dt_star - 1)
    return rel <= 0.15, f"dt* {curve.argmin_dt:.4g} vs {ref.dt_star:.4g}"


def visibility_boundary():
    p = SystemParams.from_decoherence(omega=0.08, gamma_d=0.04, d_mean=25.0)
    r = single_run_visibility(p)
    return abs(r - 0.947) <= 1e-3, f"ratio {r:.5f}"


CHECKS = [
    ("trace conservation", trace_conservation),
    ("marginal consistency", marginal_consistency),
    ("moment consistency", moment_consistency),
    ("poisson limit", poisson_limit),
    ("oracle equivalence", oracle_equivalence),
    ("aligned-level closed form", aligned_closed_form),
    ("zeno localization", zeno_localization),
    ("rabi frequency continuity", rabi_continuity),
    ("shot-noise 1/sqrt(dt) scaling", shot_noise_scaling),
    ("zero-window back-action", backaction_at_zero),
    ("zeno optimum", zeno_optimum),
    ("visibility boundary", visibility_boundary),
]


def run_checks(out):
    failed = 0
    for name, check in CHECKS:
        try:
            ok, detail = check()
        except Exception as exc:  # a crash is a failed property, not a crashed suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}", file=out)
    return failed
