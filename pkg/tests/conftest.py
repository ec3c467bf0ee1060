import pytest
from hypothesis import settings

from abclab.arith import build_spf_sieve

settings.register_profile("abclab", deadline=None, max_examples=200)
settings.load_profile("abclab")


@pytest.fixture(scope="session")
def spf_1e4():
    return build_spf_sieve(10_000)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
