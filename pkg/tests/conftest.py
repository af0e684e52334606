import numpy as np
import pytest
from hypothesis import settings

from ghprod.metric_core import random_space

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def space_from_seed(seed, n, dyadic=False):
    return random_space(n, np.random.default_rng(seed), dyadic=dyadic)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
