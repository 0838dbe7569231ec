"""Shared fixtures and the acceptance-criterion summary hook."""

import numpy as np
import pytest

_CRITERION_LINES = {}


@pytest.fixture
def criterion_report():
    """Record a one-line pass/fail verdict for an acceptance criterion.

    The recorded lines are printed in the terminal summary so the verdicts
    are visible regardless of capture settings.
    """

    def record(number: int, passed: bool, detail: str):
        verdict = "PASS" if passed else "FAIL"
        line = f"criterion {number:2d}: {verdict} - {detail}"
        _CRITERION_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERION_LINES):
        terminalreporter.write_line(_CRITERION_LINES[number])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
