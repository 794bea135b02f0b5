import math

import numpy as np
import pytest

# 4x4 matrix whose smallest eigenvalue is localized from trace data; 16 is an
# exact eigenvalue.
LOCALIZATION_MATRIX = np.array(
    [[1.0, 2.0, 9.0, 4.0], [2.0, 10.0, 0.0, 4.0], [9.0, 0.0, 5.0, 2.0], [4.0, 4.0, 2.0, 6.0]]
)
# Positive definite matrix whose trace is too large for the nonnegative
# refinements to apply.
LARGE_TRACE_MATRIX = np.array(
    [[1.0, 1.0, 1.0, 1.0], [1.0, 4.0, 1.0, 1.0], [1.0, 1.0, 16.0, 1.0], [1.0, 1.0, 1.0, 15.0]]
)
# Cyclic shift on three coordinates; eigenvalues are the cube roots of unity.
CYCLIC_SHIFT_3 = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])

H = math.sqrt(3) / 2
# Three points at mutual distance 1: |S^2| vanishes and S_z^2 = 1/3.
UNIT_TRIANGLE = [complex(-0.5, H), 0j, complex(0.5, H)]


@pytest.fixture
def localization_matrix():
    return LOCALIZATION_MATRIX.copy()


@pytest.fixture
def large_trace_matrix():
    return LARGE_TRACE_MATRIX.copy()


@pytest.fixture
def unit_triangle():
    return list(UNIT_TRIANGLE)


# --------------------------------------------------------------------------
# acceptance summary: one line per criterion

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "ran": False})
    if rep.when == "call":
        entry["ran"] = True
    if rep.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        status = "PASS" if e["ok"] and e["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {e['title']}")
