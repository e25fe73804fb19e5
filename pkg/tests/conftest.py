import functools
import itertools
from pathlib import Path

import pytest
from hypothesis import strategies as st

from teqlab.core import _from_int_code, parse, relabel, serialize
from teqlab.iso import enumerate_tournaments

DATA = Path(__file__).parent / "data"


@functools.lru_cache(maxsize=None)
def classes(n):
    return tuple(enumerate_tournaments(n))


def classes_upto(n):
    for m in range(1, n + 1):
        yield from classes(m)


def all_labeled(n):
    m = n * (n - 1) // 2
    for code in range(1 << m):
        yield _from_int_code(n, code)


def brute_canonical(t):
    return min(serialize(relabel(t, p)) for p in itertools.permutations(range(t.n)))


@pytest.fixture(scope="session")
def table1():
    return [parse(line) for line in (DATA / "table1.txt").read_text().split()]


@st.composite
def tournaments(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    code = draw(st.integers(0, (1 << (n * (n - 1) // 2)) - 1)) if n > 1 else 0
    return _from_int_code(n, code)


# -- acceptance reporting ------------------------------------------------------

_criteria: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when not in ("setup", "call"):
        return
    number, title = mark.args
    ok = report.passed if report.when == "call" else not report.failed
    prev = _criteria.get(number, (title, True))[1]
    if report.when == "setup" and ok:
        return
    _criteria[number] = (title, prev and ok and not report.skipped)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
