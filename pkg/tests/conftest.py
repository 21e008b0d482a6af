import numpy as np
import pytest

from temporal_fairness.log import EpisodeLog, EpisodeOutcome

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record():
    """Log one pass/fail line for the acceptance summary."""

    def _record(criterion, passed, detail=""):
        """``passed=None`` records a criterion that could not be evaluated."""
        status = "SKIP" if passed is None else "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _record


def outcome(n, reachers, r_high=100.0):
    reachers = list(reachers)
    rewards = [0.0] * n
    for i in reachers:
        rewards[i] = r_high if len(reachers) == 1 else r_high / n
    return EpisodeOutcome.from_reachers(reachers, rewards)


def log_from(n, episodes):
    """Build a log from a list of reacher lists, ILF rewards."""
    return EpisodeLog.from_outcomes(n, [outcome(n, r) for r in episodes])


def random_log(rng, n, episodes, p=None):
    p = rng.uniform(0.05, 0.9) if p is None else p
    return EpisodeLog.from_reach_matrix(rng.random((episodes, n)) < p)


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)
