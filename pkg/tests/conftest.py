import time
from contextlib import contextmanager

import pytest

ACCEPTANCE: dict[int, tuple] = {}


@contextmanager
def _criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed <= budget
        ACCEPTANCE[number] = (title, ok and within, elapsed, budget)
    assert within, f"criterion {number} took {elapsed:.1f}s, budget {budget:.0f}s"


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, elapsed, budget = ACCEPTANCE[number]
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s, budget {budget:.0f}s)")
