import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from latkit.generators import generate                  # noqa: E402
from latkit.report import default_corpus                # noqa: E402

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@functools.lru_cache(maxsize=None)
def corpus():
    """The acceptance corpus as (id, lattice) pairs, built once per session."""
    return tuple((spec.id, generate(spec)) for spec in default_corpus(200))


@pytest.fixture(scope="session")
def full_corpus():
    return corpus()


@pytest.fixture(scope="session")
def small_corpus():
    return tuple((i, L) for i, L in corpus() if L.n <= 10)


def record(criterion: int, ok: bool, detail: str = ""):
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
