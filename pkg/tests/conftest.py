import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from discrete_epi import make_custom

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def pmfs(draw, max_support=12, allow_gaps=True):
    size = draw(st.integers(1, max_support))
    weights = draw(st.lists(st.floats(0.0, 1.0), min_size=size, max_size=size))
    if not allow_gaps:
        weights = [w + 0.05 for w in weights]
    if sum(weights) == 0:
        weights[-1] = 1.0
    return make_custom(weights)


etas = st.floats(0.01, 0.99)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
