import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcqubit import (MomentState, PhysicsError, QubitState, SystemParams, current_dispersion,
                     electron_distribution, evolve_ladder, evolve_moments, mean_and_variance)


def test_poisson_moments():
    p = SystemParams(0.0, 0.0, 3.0, 1.0)
    mom = evolve_moments(p, None, np.linspace(0, 2, 5))
    np.testing.assert_allclose(mom.mean, 3.0 * mom.times, rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(mom.variance, 3.0 * mom.times, rtol=1e-10, atol=1e-15)
    assert np.all(np.diff(mom.variance) > 0)


def test_zero_state():
    m = evolve_moments(SystemParams(1.0, 0.2, 5.0, 2.0), QubitState(0.3, 0.1j), [0.0, 1.0])[0]
    assert (m.m1_11, m.m1_22, m.m1_12, m.m2_11, m.m2_22, m.m2_12) == (0, 0, 0, 0, 0, 0)
    assert mean_and_variance(m) == (0.0, 0.0)


def test_inconsistent_state_flagged():
    with pytest.raises(PhysicsError, match="inconsistency"):
        mean_and_variance(MomentState(QubitState(), m1_11=2.0, m2_11=1.0))


def test_against_ladder(weak_params):
    lad = electron_distribution(evolve_ladder(weak_params, None, [0.0, 0.5])[-1])
    mom = evolve_moments(weak_params, None, [0.0, 0.5])
    nbar, var = mean_and_variance(mom[-1])
    assert nbar == pytest.approx(lad.mean(), rel=1e-6)
    assert mom.second_moment[-1] == pytest.approx(lad.second_moment(), rel=1e-6)
    assert var == pytest.approx(lad.variance(), rel=1e-6)


def test_suite_against_ladder(suite):
    for p, q0, t in suite:
        lad = evolve_ladder(p, q0, t)
        mom = evolve_moments(p, q0, t)
        for i in range(1, len(t)):
            d = electron_distribution(lad[i])
            assert mom.mean[i] == pytest.approx(d.mean(), rel=1e-6)
            assert mom.second_moment[i] == pytest.approx(d.second_moment(), rel=1e-6)


class TestDispersion:
    def test_static_is_poisson(self):
        p = SystemParams(0.0, 0.0, 4.0, 1.0)
        for dt in (1e-3, 0.1, 1.0, 10.0):
            exact, asym = current_dispersion(p, None, dt)
            assert exact ** 2 == pytest.approx(4.0 / dt, rel=1e-9)
            assert asym ** 2 == pytest.approx(4.0 / dt, rel=1e-12)

    def test_small_window(self, weak_params):
        dt = 1e-3 / weak_params.d1
        exact, asym = current_dispersion(weak_params, None, dt)
        assert abs(exact - asym) / asym <= 0.01

    def test_monotone_convergence(self, weak_params):
        devs = []
        for k in (2, 3, 4):
            dt = 10.0 ** -k / weak_params.d1
            exact, _ = current_dispersion(weak_params, None, dt)
            devs.append(abs(exact * math.sqrt(dt) - math.sqrt(weak_params.d1)))
        assert devs[0] > devs[1] > devs[2]

    def test_uses_initial_current(self, weak_params):
        _, asym = current_dispersion(weak_params, QubitState(0.0), 0.5)
        assert asym == pytest.approx(math.sqrt(weak_params.d2 / 0.5))

    def test_zero_window(self, weak_params):
        with pytest.raises(ValueError, match="diverges"):
            current_dispersion(weak_params, None, 0.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 3), st.floats(-2, 2), st.floats(0, 20), st.floats(0.01, 20), st.floats(0, 1))
def test_variance_nonnegative(om, eps, d2, dd, s11):
    p = SystemParams(om, eps, d2 + dd, d2)
    mom = evolve_moments(p, QubitState(s11), np.linspace(0, 4, 17))
    assert np.all(mom.variance >= -1e-9)
    assert np.all(mom.mean >= 0)
