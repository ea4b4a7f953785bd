import pytest

from graphbell.pauli import QubitOrder

# Signed observables as printed, read left to right in the caption's qubit order.
TABLE_I_ORDER = QubitOrder((5, 1, 3, 2, 4, 6))
TABLE_I_TOKENS = [
    "xXZZXx", "-xXZZYy", "xXIYYx", "xXIYXy",
    "-yYZZXx", "yYZZYy", "-yYIYYx", "-yYIYXy",
    "xYYIXx", "-xYYIYy", "xYXXYx", "xYXXXy",
    "yXYIXx", "-yXYIYy", "yXXXYx", "yXXXXy",
]
TABLE_II_ORDER = QubitOrder((1, 3, 2, 4, 5, 6))
TABLE_II_TOKENS = [
    "-XXIYxy", "XYIYyy", "YYIYxy", "YXIYyy",
    "XXIXxx", "-XYIXyx", "-YYIXxx", "-YXIXyx",
    "-YXZXxy", "YYZXyy", "-XYZXxy", "-XXZXyy",
    "-YXZYxx", "YYZYyx", "-XYZYxx", "-XXZYyx",
]


@pytest.fixture
def table_i():
    return TABLE_I_ORDER, TABLE_I_TOKENS


@pytest.fixture
def table_ii():
    return TABLE_II_ORDER, TABLE_II_TOKENS


# -- acceptance reporting ----------------------------------------------------

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}
_SESSION = {}


def pytest_sessionstart(session):
    import time

    _SESSION["start"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    import time

    if not ACCEPTANCE_RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0].lstrip("AC"))):
        ok, detail = ACCEPTANCE_RESULTS[key]
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
    elapsed = time.perf_counter() - _SESSION.get("start", time.perf_counter())
    tr.write_line(f"{'PASS' if elapsed < 60 else 'FAIL'}  AC10 session wall time: {elapsed:.1f} s (limit 60 s)")
