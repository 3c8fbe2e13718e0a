import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from spinframe.curves import helix_spec, sample_curve, steps_for
from spinframe.pipeline import frenet_routes

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

HELIX_LENGTH = 4 * math.pi


def helix_curve(h=1e-3, a=1.0, b=1.0, length=HELIX_LENGTH):
    return sample_curve(helix_spec(a, b, length, samples=steps_for(length, h)))


@pytest.fixture(scope="session")
def helix():
    return helix_curve()


@pytest.fixture(scope="session")
def helix_routes(helix):
    return frenet_routes(helix)


@pytest.fixture(scope="session")
def coarse_helix_routes():
    return frenet_routes(helix_curve(h=1e-2))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Record one PASS/FAIL line for an acceptance criterion and return the verdict."""

    def log(number, title, ok, detail):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
