import math

import numpy as np
import pytest

from clonebell.qstate import CatParams, NoisyCloneSpec


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_spec(rng, n):
    return NoisyCloneSpec(n, CatParams(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)),
                          rng.uniform(0, 1))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
