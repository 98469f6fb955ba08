import time
from contextlib import contextmanager

import pytest

_ACCEPTANCE = []


@contextmanager
def _criterion(number, title, budget):
    t0 = time.perf_counter()
    detail = {}
    try:
        yield detail
    except BaseException as exc:
        elapsed = time.perf_counter() - t0
        _ACCEPTANCE.append((number, "FAIL", title, elapsed, f"{type(exc).__name__}: {exc}".splitlines()[0]))
        raise
    elapsed = time.perf_counter() - t0
    if elapsed > budget:
        _ACCEPTANCE.append((number, "FAIL", title, elapsed, f"over the {budget:g} s budget"))
        raise AssertionError(f"criterion {number} took {elapsed:.1f} s (budget {budget:g} s)")
    _ACCEPTANCE.append((number, "PASS", title, elapsed, detail.get("note", "")))


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title, elapsed, note in sorted(_ACCEPTANCE):
        line = f"[{status}] criterion {number}: {title} ({elapsed:.2f} s)"
        if note:
            line += f" - {note}"
        terminalreporter.write_line(line)
