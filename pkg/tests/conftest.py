import pytest

from goursat3.groups import symmetric_group
from goursat3.groupspec import parse_group
from goursat3.verify import product_for

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def S():
    """``S[n]`` is the symmetric group of degree n (shared objects)."""
    return {n: parse_group(f"S{n}") for n in range(1, 7)}


@pytest.fixture(scope="session")
def s3_cube():
    return product_for(("S3", "S3", "S3"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
