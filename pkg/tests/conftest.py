import numpy as np
import pytest

from sfqec import states

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def codes():
    return states.benchmark_codes()


@pytest.fixture(scope="session")
def sf(codes):
    return codes["SF"]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def report():
    def record(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
