import pytest

from rankbasis.basis import compute_markov_basis
from rankbasis.datasets import builtin_apa

# (criterion number, label, passed) tuples collected by test_acceptance
ACCEPTANCE_RESULTS: list[tuple[str, str, bool]] = []


@pytest.fixture(scope="session")
def apa():
    return builtin_apa().to_rank_function()


@pytest.fixture(scope="session")
def s5_basis():
    return compute_markov_basis(5)


@pytest.fixture(scope="session")
def s4_basis():
    return compute_markov_basis(4)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")

    def key(item):
        num = item[0]
        return (0, int(num)) if num.isdigit() else (1, num)

    for num, label, ok in sorted(ACCEPTANCE_RESULTS, key=key):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status} — {label}")
