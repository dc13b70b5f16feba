import math

import numpy as np
import pytest
from scipy import stats

from pcqubit import (AliasingError, QubitState, SystemParams, TruncationError, choose_n_max,
                     counting_field_distribution, electron_distribution, evolve_ladder,
                     evolve_moments, evolve_reduced)

STATIC = SystemParams(omega=0.0, epsilon=0.0, d1=1.0, d2=0.5)


def poisson(n, lam):
    return np.array([math.exp(-lam) * lam ** k / math.factorial(k) for k in n])


class TestChooseNMax:
    def test_rule(self):
        assert choose_n_max(SystemParams(1.0, 0.0, 26.0, 24.0), 1.0) == 88
        # ceil(10 + 10 sqrt(11) + 10) = ceil(53.17)
        assert choose_n_max(STATIC, 10.0, 1e-12) == 54

    def test_tail_below_eps(self):
        # Poisson(10) tail beyond 54, summed with mpmath: 4.35e-23
        n = choose_n_max(STATIC, 10.0, 1e-12)
        assert stats.poisson.sf(n, 10.0) < 1e-12

    def test_zero_time(self):
        assert choose_n_max(STATIC, 0.0) == 20

    def test_tiny_eps_raises_index(self):
        p = SystemParams(0.0, 0.0, 1.0, 0.0)
        n = choose_n_max(p, 1000.0, 1e-40)
        assert n > choose_n_max(p, 1000.0, 1e-12)
        assert stats.poisson.sf(n, 1000.0) < 1e-40

    @pytest.mark.parametrize("eps", [0.0, 1e-3])
    def test_bad_eps(self, eps):
        with pytest.raises(ValueError):
            choose_n_max(STATIC, 1.0, eps)


class TestPoisson:
    def test_ladder(self):
        traj = evolve_ladder(STATIC, QubitState(), [0.0, 1.0])
        lad = traj[-1]
        assert lad.p1[0] == pytest.approx(math.exp(-1), abs=1e-10)
        assert lad.p1[1] == pytest.approx(math.exp(-1), abs=1e-10)
        P = electron_distribution(lad).probs
        assert np.abs(P - poisson(range(len(P)), 1.0)).max() <= 1e-10

    def test_oracle(self):
        P = counting_field_distribution(STATIC, QubitState(), 1.0, 64).probs
        assert len(P) == 32
        assert np.abs(P - poisson(range(32), 1.0)).max() <= 1e-10

    def test_oracle_mass(self):
        assert counting_field_distribution(STATIC, None, 1.0, 64).total() == pytest.approx(1, abs=1e-10)


def test_trace_conserved_every_output(weak_params):
    traj = evolve_ladder(weak_params, None, np.linspace(0, 3.0, 31))
    assert np.abs(traj.trace() + traj.lost_mass - 1).max() <= 1e-8
    assert traj.lost_mass.max() <= 1e-9


def test_against_oracle(weak_params):
    lad = electron_distribution(evolve_ladder(weak_params, None, [0.0, 0.5])[-1])
    orc = counting_field_distribution(weak_params, None, 0.5)
    assert lad.total_variation(orc) <= 1e-7


def test_mean_matches_moments(weak_params):
    lad = electron_distribution(evolve_ladder(weak_params, None, [0.0, 0.5])[-1])
    mom = evolve_moments(weak_params, None, [0.0, 0.5])
    assert lad.mean() == pytest.approx(mom.mean[-1], rel=1e-6)


def test_truncation_too_small(weak_params):
    with pytest.raises(TruncationError, match="truncation too small") as info:
        evolve_ladder(weak_params, None, [0.0, 1.0], n_max=20)
    assert info.value.required_n_max == choose_n_max(weak_params, 1.0)
    assert info.value.lost_mass > 1e-9


def test_oracle_transform_checks(weak_params):
    with pytest.raises(ValueError, match="power of two"):
        counting_field_distribution(weak_params, None, 0.5, m=100)
    with pytest.raises(AliasingError):
        counting_field_distribution(weak_params, None, 0.5, m=16)


def test_marginal_recovers_reduced_state():
    p = SystemParams(0.8, -0.3, 12.0, 5.0)
    q0 = QubitState(0.3, 0.2 - 0.3j)
    t = np.linspace(0, 2.0, 9)
    lad = evolve_ladder(p, q0, t)
    red = evolve_reduced(p, q0, t)
    for i in range(len(t)):
        q = lad[i].marginal()
        assert q.sigma11 == pytest.approx(red.sigma11[i], abs=1e-6)
        assert abs(q.sigma12 - red.sigma12[i]) <= 1e-6


def test_suite_block_positivity(suite):
    for p, q0, t in suite:
        traj = evolve_ladder(p, q0, t)
        assert traj.p1.min() >= -1e-9 and traj.p2.min() >= -1e-9
        assert np.all(np.abs(traj.c) ** 2 <= traj.p1 * traj.p2 + 1e-9)
