"""
Current from a finite counting window
=====================================

The charge moments follow from a closed 12-dimensional linear system.
Dividing by the window length turns them into a current estimate whose
spread blows up like 1/sqrt(dt) for short windows.
"""
# %%
import math

from pcqubit import SystemParams, current_dispersion, evolve_moments, mean_and_variance

p = SystemParams(omega=1.0, epsilon=0.0, d1=26.0, d2=24.0)
mom = evolve_moments(p, None, [0.0, 1.0, 5.0])
for m in mom:
    nbar, var = mean_and_variance(m)
    print(f"n-bar = {nbar:9.4f}   variance = {var:9.4f}   Fano = {var / max(nbar, 1e-300):.4f}")

# %%
# sqrt(dt) times the spread approaches sqrt(I(0)) = sqrt(d1) for tiny windows.
for k in range(0, 5):
    dt = 10.0 ** -k / p.d1
    exact, asym = current_dispersion(p, None, dt)
    print(f"dt = {dt:.2e}   exact*sqrt(dt) = {exact * math.sqrt(dt):.8f}   target {math.sqrt(p.d1):.8f}")
