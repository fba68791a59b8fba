import math

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from squeezelab.su11 import SqueezeParams

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def squeeze_params(draw, alpha_max=10.0, tau_max=2.0):
    alpha = draw(st.floats(-alpha_max, alpha_max))
    mag = draw(st.floats(0.0, tau_max))
    phase = draw(st.floats(0.0, 2.0 * math.pi))
    theta = draw(st.floats(0.0, 0.5 * math.pi))
    return SqueezeParams(alpha, mag * complex(math.cos(phase), math.sin(phase)), theta)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    if module is None or not module.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.REPORT:
        terminalreporter.write_line(line)
