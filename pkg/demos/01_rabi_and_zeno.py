"""
Damped Rabi oscillations and detector-induced localization
==========================================================

A single electron shared by two dots starts in dot 1.  A point contact
next to dot 2 watches it.  Weak watching damps the oscillation; strong
watching freezes the electron in place.
"""
# %%
import numpy as np

from pcqubit import SystemParams, derive_rates, evolve_reduced, rabi_frequency, zeno_sigma11

weak = SystemParams(omega=1.0, epsilon=0.0, d1=26.0, d2=24.0)
print("decoherence rate:", derive_rates(weak).gamma_d)
print("Rabi frequency  :", rabi_frequency(weak))

# %%
# The occupation oscillates at roughly 2*omega and slowly settles to 1/2.
t = np.linspace(0, 60, 13)
traj = evolve_reduced(weak, None, t)
for ti, s in zip(t, traj.sigma11):
    print(f"t = {ti:5.1f}   sigma11 = {s:+.4f}")

# %%
# Now crank the decoherence up to gamma_d / 8 omega = 10.  After a short
# transient the occupation follows a single slow exponential.
strong = SystemParams.from_decoherence(omega=1.0, gamma_d=80.0, d_mean=100.0)
t = np.array([0.0, 0.1, 1.0, 5.0, 10.0, 20.0])
ode = evolve_reduced(strong, None, t).sigma11
for ti, a, b in zip(t[1:], ode[1:], zeno_sigma11(strong, t[1:])):
    print(f"t = {ti:5.1f}   ODE {a:.5f}   slow-decay formula {b:.5f}")
