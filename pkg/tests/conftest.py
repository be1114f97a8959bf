import numpy as np
import pytest
from hypothesis import settings

from cmcgk import harmonic as hm
from cmcgk import weierstrass as ws
from cmcgk.model import ModelParams

settings.register_profile("cmcgk", max_examples=60, deadline=None)
settings.load_profile("cmcgk")


def revolution_closed_form(c: float, tau: float, z):
    """Independent closed form of the rotational surface with g(z) = z (tau > 0)."""
    theta = np.arctan2(c, tau)
    e = np.exp(2j * theta)
    r2 = np.abs(z) ** 2
    zeta = (e - 1) / c * z / (e * r2 - 1)
    x3 = -(tau / c**2) * np.arctan((r2 - np.cos(2 * theta)) / np.sin(2 * theta)) + 2 / (c * (1 - r2))
    return zeta, x3


@pytest.fixture(scope="session")
def rev_params():
    return ModelParams.from_c(1.0, 1.0)


@pytest.fixture(scope="session")
def rev_surface_81(rev_params):
    u, v = hm.rectangle_axes(0, 0.55, 0.55, 81, 81)
    gm = hm.generate("identity", u, v)
    return ws.integrate(ws.ReconstructionInput(rev_params, gm))


@pytest.fixture(scope="session")
def rev_surface_161(rev_params):
    u, v = hm.rectangle_axes(0, 0.55, 0.55, 161, 161)
    gm = hm.generate("identity", u, v)
    return ws.integrate(ws.ReconstructionInput(rev_params, gm))


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, title: str, passed: bool, detail: str) -> bool:
    ACCEPTANCE_LINES[number] = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
