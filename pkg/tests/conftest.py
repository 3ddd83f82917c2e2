import pytest
from hypothesis import strategies as st

from nobeling.cube import CoordinateOrder, CubeSet


def cube(*bitstrings, n=None, order=None):
    if order is not None:
        return CubeSet.from_bitstrings(bitstrings, order=order)
    if n is None:
        n = len(bitstrings[0])
    return CubeSet.from_bitstrings(bitstrings, n=n)


FULL2 = cube("00", "01", "10", "11")
DIAG2 = cube("00", "11")


@st.composite
def orders(draw, min_n=0, max_n=5):
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(list(range(n))))
    return CoordinateOrder(n, tuple(perm))


@st.composite
def cube_sets(draw, min_n=0, max_n=5):
    order = draw(orders(min_n, max_n))
    points = draw(st.sets(st.integers(0, (1 << order.n) - 1), max_size=1 << order.n))
    return CubeSet(order, tuple(points))


# acceptance reporting: one PASS/FAIL line per criterion at the end of the run

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    number, title = marker.args
    status = "PASS" if report.passed else "FAIL"
    if _CRITERIA.get(number, ("PASS",))[0] == "PASS" or status == "FAIL":
        _CRITERIA[number] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}")
