import numpy as np
import pytest

from abkit.solenoid import SolenoidSpec

_CRITERIA = []


def record_criterion(number, name, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} [{number:2d}] {name}: {detail}"
    _CRITERIA.append((number, line))
    print(line)
    return passed


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_CRITERIA):
        terminalreporter.write_line(line)


def reference_solenoid(L_over_R=100.0, **kw):
    """a = 1 cm, R = 10 cm, v0 = 1 cm/s, u = 100 cm/s; electron count grows with L so the enclosed-flux phase stays near pi."""
    return SolenoidSpec.from_electron_count(1.0, 10.0, 10.0 * L_over_R, 1.0, 100.0, 1.0e13 * L_over_R, **kw)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
