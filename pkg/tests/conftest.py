import numpy as np
import pytest

from laxphillips import LPSystem, ScatteringMatrix

# acceptance criteria register "name -> (passed, detail)" here for the summary
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def inner_single():
    return LPSystem(ScatteringMatrix.blaschke([1j]))


@pytest.fixture(scope="session")
def anti_single():
    return LPSystem(ScatteringMatrix.blaschke([1j], orientation="anti_inner"))


@pytest.fixture(scope="session")
def smooth():
    return LPSystem(ScatteringMatrix.phase([3.0], [1.0, 0.0, 1.0]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")
