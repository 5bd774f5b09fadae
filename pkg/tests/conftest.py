import time
from contextlib import contextmanager

import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Time a block against a limit and record one PASS/FAIL line for it."""

    @contextmanager
    def run(label: str, limit_s: float):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - t0
            within = elapsed < limit_s
            verdict = "PASS" if ok and within else "FAIL"
            note = "" if within else f" (over the {limit_s:g} s limit)"
            line = f"{verdict}  {label}  [{elapsed:.2f} s]{note}"
            _LINES.append(line)
            print(line)
        assert within, f"{label}: took {elapsed:.1f} s, limit {limit_s:g} s"

    return run


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
