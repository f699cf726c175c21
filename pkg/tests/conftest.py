import functools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from uqglmn.gauss_currents import build_currents
from uqglmn.graded_tensor import ParityStructure

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

SAMPLE = {"a": Fraction(3, 2), "b": Fraction(5), "q": Fraction(7, 3)}

ACCEPTANCE = {}


@functools.lru_cache(maxsize=None)
def currents(m, n, N=6, graded=True, sampled=False, points=("a", "b")):
    """Currents of the two-point representation, shared by every test module."""
    return build_currents(ParityStructure(m, n, graded), points, N, values=SAMPLE if sampled else None)


def record(criterion, ok, detail=""):
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))


@pytest.fixture
def ps11():
    return ParityStructure(1, 1)


@pytest.fixture
def ps21():
    return ParityStructure(2, 1)
