from fractions import Fraction

import pytest
from hypothesis import given

from qdeform.scalars import (ONE, Q, ZERO, Scalar, bracket, format_scalar, gauss_binomial,
                             is_square, nth_root, parse_scalar, q_integer, specialize)

from conftest import scalars, units


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO and a * ONE == a


@given(units())
def test_inverse(a):
    assert a * a.inverse() == ONE
    assert (a / a).is_one()


@given(scalars(), units())
def test_canonical_form_is_equality(a, b):
    # same value reached two ways has the same stored representation
    x = (a * b) / b
    assert x == a
    assert hash(x) == hash(a)
    assert str(x) == str(a)


@given(scalars())
def test_format_parse_round_trip(a):
    assert parse_scalar(format_scalar(a)) == a


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO ** -1


def test_powers():
    assert Q ** 3 * Q ** -3 == ONE
    assert (Q + 1) ** 2 == Q ** 2 + 2 * Q + 1
    assert Scalar.q_pow(-2) == ONE / (Q * Q)


def test_specialize():
    assert specialize((Q ** 2 + 1) / (Q - 2), Fraction(1, 2)) == Fraction(-5, 6)
    with pytest.raises(ZeroDivisionError):
        specialize(ONE / (Q - 1), 1)


def test_q_integer():
    assert q_integer(1, Q) == ONE
    assert q_integer(3, Q) == 1 + Q + Q ** 2
    assert q_integer(4, Q ** 2) == (Q ** 8 - 1) / (Q ** 2 - 1)
    with pytest.raises(ValueError):
        q_integer(0, Q)


def test_gauss_binomial():
    # [4 choose 2] = [4][3]/([2][1]) worked out by hand
    assert gauss_binomial(4, 2, Q) == Q ** 4 + Q ** 2 + 2 + Q ** -2 + Q ** -4
    assert gauss_binomial(3, 1, Q) == bracket(3, Q) == Q ** 2 + 1 + Q ** -2
    assert gauss_binomial(5, 0, Q) == ONE
    assert gauss_binomial(5, 5, Q) == ONE
    with pytest.raises(ValueError):
        gauss_binomial(2, 3, Q)
    with pytest.raises(ZeroDivisionError):
        bracket(2, ONE)


@given(units())
def test_symmetric_binomial_pascal(t):
    if not (t - t.inverse()):
        return
    # [m r] = t^r [m-1 r] + t^(r-m) [m-1 r-1]
    m, r = 4, 2
    lhs = gauss_binomial(m, r, t)
    rhs = t ** r * gauss_binomial(m - 1, r, t) + t ** (r - m) * gauss_binomial(m - 1, r - 1, t)
    assert lhs == rhs


@given(units())
def test_square_roots_of_squares(a):
    r = nth_root(a * a, 2)
    assert r is not None and r * r == a * a
    c = nth_root(a ** 3, 3)
    assert c is not None and c ** 3 == a ** 3


def test_non_squares():
    assert not is_square(Q)
    assert not is_square(Scalar(2))
    assert not is_square(Scalar(-1))
    assert not is_square(Q ** 2 + 1)
    assert is_square(Scalar(4) * Q ** 2 / (Q + 1) ** 2)
    assert nth_root(Scalar(-8), 3) == Scalar(-2)


def test_parse():
    assert parse_scalar("q^2 - 1/3") == Q ** 2 - Scalar(1) / 3
    assert parse_scalar("(q+1)/(q-1)") == (Q + 1) / (Q - 1)
    assert parse_scalar("q^-1") == Q.inverse()
