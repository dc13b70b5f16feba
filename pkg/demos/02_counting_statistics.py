"""
How many electrons went through?
================================

The number-resolved ladder gives the full distribution P_n(t) of charge
collected by the detector.  We cross-check it against an independent
Fourier inversion of the counting-field generating function.
"""
# %%
import numpy as np

from pcqubit import (SystemParams, counting_field_distribution, electron_distribution,
                     evolve_ladder)

p = SystemParams(omega=1.0, epsilon=0.0, d1=6.0, d2=2.0)
traj = evolve_ladder(p, None, np.linspace(0, 3, 4))
print("trace at each time:", traj.trace())
print("probability lost past n_max:", traj.lost_mass[-1])

# %%
ladder = electron_distribution(traj[-1])
oracle = counting_field_distribution(p, None, 3.0)
print(f"mean {ladder.mean():.6f}, variance {ladder.variance():.6f}")
print("total variation to oracle:", ladder.total_variation(oracle))

# %%
# A coarse text histogram.  The qubit switching between the two detector
# rates makes the distribution wider than a Poisson law with the same mean.
for n in range(0, 25, 2):
    bar = "#" * int(round(400 * ladder.probs[n]))
    print(f"{n:3d} {ladder.probs[n]:.4f} {bar}")
