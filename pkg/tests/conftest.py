import math

import numpy as np
import pytest

from spintomo import _backend
from spintomo.su2 import EulerAngles


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_angles(rng):
    return EulerAngles(rng.uniform(0, 2 * math.pi), math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi))


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run a test once per importable kernel backend."""
    previous = _backend.kernels
    _backend.use(request.param)
    yield request.param
    _backend.kernels = previous


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[number])
