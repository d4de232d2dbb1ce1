import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from monolearn import _accel  # noqa: E402
from monolearn.core import MonotoneFn  # noqa: E402
from monolearn.enumeration import monotone_tables  # noqa: E402

_acceptance_lines = []
# criterion detail text, keyed by test name; filled in by test_acceptance
ACCEPTANCE_DETAIL = {}


@pytest.fixture(params=_accel.available_backends())
def backend(request):
    previous = _accel.set_backend(request.param)
    yield request.param
    _accel.set_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


def random_functions(n, count, rng):
    tables = monotone_tables(n)
    picks = rng.integers(0, tables.size, size=count)
    return [MonotoneFn._trusted(n, int(tables[i])) for i in picks]


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    _acceptance_lines.append(f"[{status}] {ACCEPTANCE_DETAIL.get(name, name)}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
