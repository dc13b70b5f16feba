"""
Best window for measuring the current
=====================================

Short windows suffer shot noise, long ones let the qubit drift.  The
optimum balances the two.  We compare the numerical optimum with the
leading-order formulas in both regimes.
"""
# %%
import warnings

import numpy as np

from pcqubit import (SystemParams, closed_form_weak, closed_form_zeno, error_curve,
                     optimize_measurement_time, single_run_visibility)

warnings.simplefilter("ignore")

# %%
# Strong decoherence with a detector current far above gamma_d: the
# numerical optimum tracks the Zeno formula.
for ratio in (40, 100, 1000):
    p = SystemParams.from_decoherence(omega=1.0, gamma_d=2 * ratio, d_mean=200 * ratio)
    num = optimize_measurement_time(p)
    ref = closed_form_zeno(p)
    print(f"gamma_d/2omega = {ratio:5d}   numeric dt* {num.argmin_dt:.4f}   formula {ref.dt_star:.4f}")

# %%
# Weak decoherence.  Here the drift error is bounded by delta_D^2 and the
# qubit comes back to dot 1 every Rabi period, so the total error keeps
# falling at long windows and the best window is a late revival.
p = SystemParams(omega=1.0, epsilon=0.0, d1=26.0, d2=24.0)
curve = error_curve(p, None, np.geomspace(0.1, 100, 10))
for dt, tot in zip(curve.dts, curve.total_sq):
    print(f"dt = {dt:8.3f}   total error^2 = {tot:9.4f}")
print("numeric optimum :", optimize_measurement_time(p).argmin_dt)
print("weak formula    :", closed_form_weak(p).dt_star)

# %%
# Single-run visibility of Rabi oscillations at omega = 2 gamma_d.
p = SystemParams.from_decoherence(omega=0.08, gamma_d=0.04, d_mean=25.0)
print("visibility ratio:", single_run_visibility(p))
