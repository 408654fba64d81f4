import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ptscatter import make_potential  # noqa: E402
from ptscatter.kernels import available_backends  # noqa: E402


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]


@pytest.fixture
def worked():
    """Z=[2,1], Y=[1] at phi=pi/2: det T = 2, alpha = (1-2i)/2."""
    return make_potential(1.0, [2.0, 1.0], [1.0]), math.pi / 2


def random_pt(rng, max_m=12, coupling=3.0, h=1.0):
    M = int(rng.integers(1, max_m + 1))
    return make_potential(h, rng.uniform(-coupling, coupling, M),
                          rng.uniform(-coupling, coupling, M - 1))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
