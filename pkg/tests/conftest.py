import re

import numpy as np
import pytest

from ewl.games import BATTLE_OF_SEXES, MATCHING_PENNIES, PRISONERS_DILEMMA

_RESULTS = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def pd():
    return PRISONERS_DILEMMA


@pytest.fixture
def mp():
    return MATCHING_PENNIES


@pytest.fixture
def bos():
    return BATTLE_OF_SEXES


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not match:
        return
    key = (int(match.group(1)), match.group(2))
    if report.when == "call" or report.failed:
        _RESULTS[key] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), outcome in sorted(_RESULTS.items()):
        terminalreporter.write_line(f"criterion {num:2d} {name.replace('_', ' ')}: {outcome}")
