import numpy as np
import pytest

from pwpenh import _accel, synth

ACCEPTANCE_KEY = pytest.StashKey[list]()

BACKENDS = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    previous = _accel.set_backend(request.param)
    yield request.param
    _accel.set_backend(previous)


@pytest.fixture(scope="session")
def speech():
    return synth.speech_like(3.0, seed=0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line)
