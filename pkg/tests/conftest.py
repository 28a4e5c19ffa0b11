import pytest

from involutory.classical_decomposition import build_e8, build_sl2
from involutory.gamma_clifford import build_gammas

ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def gammas():
    return build_gammas()


@pytest.fixture(scope="session")
def e8(gammas):
    return build_e8(gammas)


@pytest.fixture(scope="session")
def sl2():
    return build_sl2()


@pytest.fixture
def accept():
    """Record one acceptance line: accept(number, passed, summary)."""
    def record(n, passed, summary):
        ACCEPTANCE[n] = (passed, summary)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, summary = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {summary}")
