import numpy as np
import pytest

from stepnls.background import make_params
from stepnls.scattering import InitialDatum, Reflection, tanh_step


@pytest.fixture(scope="session")
def p_default():
    return make_params(1.0, 0.6)


@pytest.fixture(scope="session")
def r_tanh(p_default):
    return Reflection(p_default, tanh_step(p_default, 1.0))


@pytest.fixture(scope="session")
def p_zero():
    return make_params(1.0, 0.0)


@pytest.fixture(scope="session")
def r_tanh_zero(p_zero):
    return Reflection(p_zero, tanh_step(p_zero, 1.0))


@pytest.fixture(scope="session")
def r_pure_zero(p_zero):
    return Reflection.pure_step(p_zero)


def smootherstep_datum(p, half_width=1.0):
    """Background carrier times a quintic C^2 ramp; u''' jumps at the ramp ends."""
    def profile(x, side=0):
        x = np.asarray(x, float)
        s = np.clip((half_width - x) / (2 * half_width), 0, 1)
        return p.alpha * np.exp(2j * p.beta * x) * s**3 * (10 - 15 * s + 6 * s * s)

    return InitialDatum(profile, -half_width, half_width, 0.0, (8, 2), "smootherstep")


ACCEPTANCE_LINES = []


def report(label, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
