import numpy as np
import pytest

from twistorcheck import build_deformed, build_quadric, build_smooth_o11
from twistorcheck.systems import real_section_system

ANTIREAL_LAMBDA = [1j, 0.0, -1j]


@pytest.fixture(scope="session")
def quadric():
    return build_quadric()


@pytest.fixture(scope="session")
def quadric_system(quadric):
    return real_section_system(quadric)


@pytest.fixture(scope="session")
def quadric_exact():
    return build_quadric(exact=True)


@pytest.fixture(scope="session")
def deformed():
    return build_deformed(ANTIREAL_LAMBDA, "antireal")


@pytest.fixture(scope="session")
def smooth():
    return build_smooth_o11()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)


def fd_jacobian(system, p, h=1e-6):
    """Central finite differences, the reference for the analytic Jacobian."""
    p = np.asarray(p, dtype=float)
    out = np.zeros((len(system), len(p)))
    for i in range(len(p)):
        step = np.zeros(len(p))
        step[i] = h * (1.0 + abs(p[i]))
        fp = np.array([float(v) for v in system.residuals(p + step)])
        fm = np.array([float(v) for v in system.residuals(p - step)])
        out[:, i] = (fp - fm) / (2.0 * step[i])
    return out
