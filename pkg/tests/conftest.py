import pytest

from cyverlinde import make

MODULAR = [
    "trivial",
    "fibonacci",
    "ising",
    "semion",
    "cyclic(3,1)",
    "cyclic(3,2)",
    "su2(1)",
    "su2(2)",
    "su2(3)",
    "su2(4)",
    "fibonacci*ising",
]
PREMODULAR = ["rep_z2"]
ALL = MODULAR + PREMODULAR


@pytest.fixture(scope="session")
def cats():
    return {name: make(name) for name in ALL}


@pytest.fixture(scope="session")
def fib():
    return make("fibonacci")


@pytest.fixture(scope="session")
def ising():
    return make("ising")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
