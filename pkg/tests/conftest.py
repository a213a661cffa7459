import os

import pytest
from hypothesis import settings

from reesdmod.corepoly import Ring, parse_poly
from reesdmod.gbcomm import PresMatrix
from reesdmod.rees import ReesInput

# fixed example streams keep CI runs reproducible
settings.register_profile("ci", derandomize=True, deadline=None)
settings.load_profile("ci")

HERE = os.path.dirname(os.path.abspath(__file__))
INPUTS = os.path.join(os.path.dirname(HERE), "inputs")


def matrix_input(rows, xnames="xyz", tnames=()):
    R = Ring.polynomial(xnames)
    entries = [[parse_poly(c, R) for c in row] for row in rows]
    return ReesInput(R, PresMatrix(R, entries), tnames=tuple(tnames))


def corner_matrix(e):
    """The 4 x 3 test matrix with columns of degree 1, 1 and e."""
    return [["x", "0", "0"], ["y", "x", "0"], ["z", "y", f"x^{e}"], ["0", "z", f"z^{e}"]]


@pytest.fixture
def ex1():
    return matrix_input(corner_matrix(2), tnames="abcd")


@pytest.fixture
def ex2():
    return matrix_input(corner_matrix(5), tnames=("K_1", "K_2", "K_3", "K_4"))


@pytest.fixture
def inputs_dir():
    return INPUTS


# acceptance criteria: one PASS/FAIL line each in the terminal summary

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    num, title = mark.args
    if rep.when == "setup" and rep.passed:
        return
    _criteria[num] = (title, rep.passed, call.duration if rep.when == "call" else 0.0)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, ok, secs = _criteria[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {title} ({secs:.1f}s)")
