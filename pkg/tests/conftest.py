import numpy as np
import pytest

from puritybounds.numerics import available_backends

ACCEPTANCE = {}


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE.values():
        terminalreporter.write_line(line)
