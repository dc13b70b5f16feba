import numpy as np
import pytest

from pcqubit import QubitState, SystemParams, derive_rates


def random_suite(n=20, seed=20261018):
    """Random parameter sets with gamma_d * t_max <= 10 and generic initial states."""
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(n):
        d2 = rng.uniform(0.5, 15.0)
        p = SystemParams(omega=rng.uniform(0.1, 2.0), epsilon=rng.uniform(-1.0, 1.0),
                         d1=d2 + rng.uniform(0.1, 15.0), d2=d2)
        t_max = min(rng.uniform(0.5, 3.0), 10 / derive_rates(p).gamma_d)
        s11 = rng.uniform(0, 1)
        r = rng.uniform(0, 1) * np.sqrt(s11 * (1 - s11))
        q0 = QubitState(s11, r * np.exp(1j * rng.uniform(0, 2 * np.pi)))
        cases.append((p, q0, np.linspace(0, t_max, 11)))
    return cases


@pytest.fixture(scope="session")
def suite():
    return random_suite()


@pytest.fixture
def weak_params():
    return SystemParams(omega=1.0, epsilon=0.0, d1=26.0, d2=24.0)


SUITE_BUDGET_S = 60.0
_acceptance_key = pytest.StashKey[list]()
_start_key = pytest.StashKey[float]()


def pytest_sessionstart(session):
    import time
    session.config.stash[_start_key] = time.perf_counter()
    session.config.stash[_acceptance_key] = []


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[_acceptance_key]


def pytest_sessionfinish(session, exitstatus):
    import time
    elapsed = time.perf_counter() - session.config.stash[_start_key]
    session.config.stash[_start_key] = elapsed
    if elapsed > SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_acceptance_key, [])
    elapsed = config.stash.get(_start_key, 0.0)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
    ok = elapsed <= SUITE_BUDGET_S
    terminalreporter.write_line(
        f"suite wall time {elapsed:.1f} s ({'within' if ok else 'OVER'} the {SUITE_BUDGET_S:.0f} s budget)")
