import numpy as np
import pytest

from gradiometry import kernels
from gradiometry.constants import RB87_MASS
from gradiometry.interferometer import InterferometerConfig


@pytest.fixture(params=sorted(kernels.IMPLEMENTATIONS))
def backend(request, monkeypatch):
    """Run a test once per available kernel implementation."""
    monkeypatch.setattr(kernels, "_impl", kernels.IMPLEMENTATIONS[request.param])
    return request.param


@pytest.fixture
def rb_config():
    """Rb-87 interferometer with k_eff = 1.6e7 rad/m and T = 0.1 s."""
    return InterferometerConfig.from_k_eff(1.6e7, RB87_MASS, (0.0, 0.0, 0.0), 0.02, 0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20211)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
