import numpy as np
import pytest
from hypothesis import settings

from warped_ineq.geometry import ManifoldModel
from warped_ineq.profiles import make_builtin_profile

settings.register_profile("default", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("default")


def model(family, N, **params):
    return ManifoldModel(N, make_builtin_profile(family, params))


@pytest.fixture
def hyp():
    return lambda N: model("hyperbolic", N)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
