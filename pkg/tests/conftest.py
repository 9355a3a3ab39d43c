import pytest

from ksforge.ghmat import gh_compose, gh_cyclic_prime, gh_search
from ksforge.ksset import build_ks
from ksforge.shadamard import from_gh

# Lexicographically least normalized GH(3,2); checked against the naive
# histogram verifier in test_ghmat.py.
GH32_ROWS = (
    (0, 0, 0, 0, 0, 0),
    (0, 0, 1, 1, 2, 2),
    (0, 1, 0, 2, 1, 2),
    (0, 1, 2, 0, 2, 1),
    (0, 2, 1, 2, 0, 1),
    (0, 2, 2, 1, 1, 0),
)


@pytest.fixture(scope="session")
def gh31():
    return gh_cyclic_prime(3)


@pytest.fixture(scope="session")
def gh32():
    return gh_search(3, 2)


@pytest.fixture(scope="session")
def gh33(gh31):
    return gh_compose(gh31, gh31)


@pytest.fixture(scope="session")
def gh36(gh32, gh31):
    return gh_compose(gh32, gh31)


@pytest.fixture(scope="session")
def gh_fleet(gh31, gh32, gh33, gh36):
    return [gh31, gh32, gh33, gh36, gh_cyclic_prime(5), gh_cyclic_prime(7)]


@pytest.fixture(scope="session")
def sh6(gh32):
    return from_gh(gh32)


@pytest.fixture(scope="session")
def ks6(sh6):
    return build_ks(sh6)


@pytest.fixture(scope="session")
def ks18(gh36):
    return build_ks(from_gh(gh36))


ACCEPTANCE_LINES: list[str] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
