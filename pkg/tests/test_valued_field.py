from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropinv.errors import ModelMismatchError, ParseError
from tropinv.valued_field import (
    INF,
    FieldModel,
    PAdicRational,
    PuiseuxElement,
    format_trop,
    parse_element,
    parse_trop,
    trop_add,
    trop_min,
    val,
)

from conftest import padic, puiseux

P = PuiseuxElement.parse


def test_val_examples():
    assert val(P("t^2 + 3*t^3")) == 2
    assert val(PuiseuxElement()) is INF
    assert val(PAdicRational(Fraction(50, 3), 5)) == 2
    assert val(PAdicRational(0, 5)) is INF


def test_ring_examples():
    x = P("t + 1") - 1
    assert x == P("t") and val(x) == 1
    assert P("1 + t") * P("1 - t") == P("1 - t^2")
    y = PAdicRational(Fraction(2, 3), 7) * PAdicRational(Fraction(3, 2), 7)
    assert y == 1 and val(y) == 0


def test_fractional_exponents():
    x = P("t^(1/2)")
    assert val(x) == Fraction(1, 2)
    assert x * x == P("t")
    assert val(P("1 + 2*t^(3/2)") ** 3) == 0


def test_trop_examples():
    assert trop_min(INF, 3) == 3
    assert trop_add(INF, 5) is INF
    assert trop_min(Fraction(1, 2), Fraction(2, 3)) == Fraction(1, 2)
    assert INF > 10**9 and not INF < 0
    assert parse_trop(format_trop(Fraction(-7, 3))) == Fraction(-7, 3)
    assert parse_trop("inf") is INF


def test_model_mismatch():
    with pytest.raises(ModelMismatchError):
        PAdicRational(1, 5) + PAdicRational(1, 7)
    with pytest.raises(ModelMismatchError):
        PAdicRational(1, 5) * P("t")


@pytest.mark.parametrize("text", ["2/x", "1 +", "t^(1/0)", "3**t", ""])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_element(text)


@given(puiseux(), puiseux())
def test_puiseux_valuation_laws(x, y):
    assert val(x * y) == trop_add(val(x), val(y))
    s = val(x + y)
    assert s >= trop_min(val(x), val(y))
    if val(x) != val(y):
        assert s == trop_min(val(x), val(y))


@given(padic(), padic())
def test_padic_valuation_laws(x, y):
    assert val(x * y) == trop_add(val(x), val(y))
    s = val(x + y)
    assert s >= trop_min(val(x), val(y))
    if val(x) != val(y):
        assert s == trop_min(val(x), val(y))


@given(puiseux())
def test_puiseux_round_trip(x):
    assert P(str(x)) == x


@given(padic(7))
def test_padic_round_trip(x):
    assert parse_element(str(x), FieldModel("padic", 7)) == x


@given(puiseux(), puiseux(), puiseux())
def test_puiseux_ring_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == PuiseuxElement()


@given(st.integers(2, 40).filter(lambda p: all(p % q for q in range(2, p))))
def test_padic_model_accepts_primes(p):
    assert FieldModel("padic", p).p == p


def test_padic_model_rejects_composite():
    with pytest.raises(Exception):
        FieldModel("padic", 6)
