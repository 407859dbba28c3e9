import os
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trion.pipeline import DEFAULT_SEED, prepare  # noqa: E402

# Set TRION_TEST_CACHE to a directory to reuse orthonormal Hamiltonians
# between pytest sessions; by default every session builds them afresh.
_CACHE = os.environ.get("TRION_TEST_CACHE")

ACCEPTANCE: dict = {}


def record(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[number] = (passed, detail)


class _Bundles:
    def __init__(self):
        self._store = {}
        self.build_seconds = {}

    def get(self, name: str, n_functions: int = 128):
        key = (name, n_functions)
        if key not in self._store:
            t0 = time.perf_counter()
            self._store[key] = prepare(name, n_functions, DEFAULT_SEED, cache_dir=_CACHE)
            self.build_seconds[key] = time.perf_counter() - t0
        return self._store[key]


@pytest.fixture(scope="session")
def bundles():
    return _Bundles()


@pytest.fixture(scope="session")
def runs():
    """Session-wide memo for expensive optimisation runs shared by several tests."""
    return {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
