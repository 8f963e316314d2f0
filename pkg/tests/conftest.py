import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.SUMMARY_LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.SUMMARY_LINES:
            terminalreporter.write_line(line)
