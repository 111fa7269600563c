"""Novikov field arithmetic, the valuation, and the Q(mu) embedding."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from floergamma.novikov import (
    INF,
    NovikovElement,
    RationalFunction,
    common_scale,
    format_extrat,
    from_rational_function,
    mdeg_tuple,
    parse_rat,
    to_rational_function,
)


def nov(*terms) -> NovikovElement:
    return NovikovElement([(Fraction(c), Fraction(e)) for c, e in terms])


rationals = st.builds(
    Fraction,
    st.integers(min_value=-40, max_value=40),
    st.integers(min_value=1, max_value=12),
)
elements = st.lists(
    st.tuples(rationals, rationals), max_size=5
).map(NovikovElement)


def test_addition_examples():
    assert nov((1, "1/2")) + nov((-1, "1/2")) == NovikovElement.zero()
    assert nov((3, "1/2")) + nov((2, "-1/3")) == nov((2, "-1/3"), (3, "1/2"))
    assert nov((1, "1/120"), (1, "2/5")) + nov((1, "2/5")) == \
        nov((1, "1/120"), (2, "2/5"))


def test_multiplication_examples():
    assert nov((1, "1/2")) * nov((2, "1/3")) == nov((2, "5/6"))
    assert nov((8, "2/5")) * nov((1, "1/120")) == nov((8, "49/120"))
    assert Fraction(2, 5) + Fraction(1, 120) == Fraction(49, 120)
    assert nov((3, 1)) * NovikovElement.zero() == NovikovElement.zero()


def test_mdeg_examples():
    assert nov((3, "1/2"), (-2, "-1/3")).mdeg() == Fraction(-1, 3)
    assert NovikovElement.zero().mdeg() == INF
    assert nov((1, "49/120")).mdeg() == Fraction(49, 120)


def test_mdeg_tuple_examples():
    assert mdeg_tuple([nov((1, 1)), nov((1, 0))]) == 0
    assert mdeg_tuple([NovikovElement.zero(), NovikovElement.zero()]) == INF
    assert mdeg_tuple([]) == INF
    assert mdeg_tuple([nov((1, "1/120")), NovikovElement.zero(), nov((-1, -2))]) == -2


def test_evaluate_at_one_examples():
    assert nov((1, "1/120")).evaluate_at_one() == 1
    assert nov((3, "1/2"), (-2, "-1/3")).evaluate_at_one() == 1
    assert NovikovElement.zero().evaluate_at_one() == 0


def test_rational_function_examples():
    rf = to_rational_function(nov((1, "1/2"), (1, "1/3")), 6)
    assert rf.num == (0, 0, Fraction(1), Fraction(1))  # mu^2 + mu^3
    assert to_rational_function(NovikovElement.zero(), 5).is_zero()
    rf = to_rational_function(nov((8, "2/5")), 120)
    assert rf.num[48] == 8 and sum(1 for c in rf.num if c) == 1


def test_rational_function_rejects_bad_scale():
    with pytest.raises(ValueError):
        to_rational_function(nov((1, "1/3")), 2)
    with pytest.raises(ValueError):
        to_rational_function(nov((1, "-1/2")), 2)


def test_text_forms():
    assert str(nov((8, "2/5"))) == "8*l^(2/5)"
    assert str(nov((3, "1/2"), (-2, "-1/3"))) == "-2*l^(-1/3)+3*l^(1/2)"
    assert str(NovikovElement.zero()) == "0"
    assert format_extrat(INF) == "inf"
    assert format_extrat(Fraction(-3, 7)) == "-3/7"
    assert parse_rat("49/120") == Fraction(49, 120)
    with pytest.raises(ValueError):
        parse_rat("1/0")


@given(elements, elements)
def test_mdeg_multiplicative(a, b):
    if a.is_zero() or b.is_zero():
        assert (a * b).mdeg() == INF
    else:
        assert (a * b).mdeg() == a.mdeg() + b.mdeg()


@given(elements, elements)
def test_mdeg_ultrametric(a, b):
    s = a + b
    assert s.mdeg() >= min(a.mdeg(), b.mdeg())
    if a.mdeg() != b.mdeg():
        assert s.mdeg() == min(a.mdeg(), b.mdeg())


@given(elements, elements)
def test_evaluate_at_one_is_ring_map(a, b):
    assert (a * b).evaluate_at_one() == a.evaluate_at_one() * b.evaluate_at_one()
    assert (a + b).evaluate_at_one() == a.evaluate_at_one() + b.evaluate_at_one()


@given(elements)
def test_rational_function_round_trip(a):
    shift = a.mdeg()
    shifted = a if a.is_zero() or shift >= 0 else a.shift(-shift)
    scale = common_scale([shifted])
    assert from_rational_function(to_rational_function(shifted, scale)) == shifted


def test_rational_function_field_ops():
    one = RationalFunction((Fraction(1),))
    x = RationalFunction((0, Fraction(1)))
    assert (x * x - x * x).is_zero()
    assert x + one == RationalFunction((Fraction(1), Fraction(1)))
    q = RationalFunction((0, Fraction(1)), (Fraction(1), Fraction(1)))  # x/(1+x)
    assert q + q == RationalFunction((0, Fraction(2)), (Fraction(1), Fraction(1)))
