"""Shared fixtures and strategies.

Generating polynomials that are not shipped with the package are written
to a per-session temporary cache so the tests never touch the user's.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from tropinv.valued_field import PAdicRational, PuiseuxElement

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    path = tmp_path_factory.mktemp("genpoly-cache")
    old = os.environ.get("TROPINV_CACHE")
    os.environ["TROPINV_CACHE"] = str(path)
    yield path
    if old is None:
        os.environ.pop("TROPINV_CACHE", None)
    else:
        os.environ["TROPINV_CACHE"] = old


@pytest.fixture
def rng():
    return random.Random(20261015)


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
exponents = st.fractions(min_value=-3, max_value=6, max_denominator=6)


@st.composite
def puiseux(draw, max_terms: int = 4):
    n = draw(st.integers(0, max_terms))
    return PuiseuxElement([(draw(exponents), draw(rationals)) for _ in range(n)])


@st.composite
def padic(draw, p: int = 5):
    num = draw(st.integers(-10**6, 10**6))
    den = draw(st.integers(1, 10**4))
    return PAdicRational(Fraction(num, den), p)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    def emit(criterion: str, ok: bool, detail: str) -> bool:
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
