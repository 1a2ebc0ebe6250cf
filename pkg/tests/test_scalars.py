from fractions import Fraction

import pytest

from prolie.scalars import GQ, gq


def test_arithmetic_field_axioms_on_samples():
    a = gq(Fraction(1, 2), Fraction(-3, 4))
    b = gq(2, 5)
    c = gq(Fraction(-7, 3), 0)
    assert (a + b) - b == a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a / b) * b == a
    assert a * a.conjugate() == GQ(a.norm2())


def test_division_is_exact():
    a = gq(1, 1)
    b = gq(3, -2)
    q = a / b
    assert q * b == a
    assert q == gq(Fraction(1, 13), Fraction(5, 13))


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        gq(1) / gq(0)


def test_int_coercion_and_equality():
    assert gq(3) == 3
    assert gq(3, 1) != 3
    assert gq(Fraction(1, 2)) + 1 == gq(Fraction(3, 2))
    assert 2 * gq(0, 1) == gq(0, 2)
    assert hash(gq(5)) == hash(Fraction(5))


def test_str_forms():
    assert str(gq(1, 1)) == "1+i"
    assert str(gq(0, -1)) == "-i"
    assert str(gq(Fraction(1, 2), Fraction(-2, 3))) == "1/2-2/3i"
    assert str(gq(-2)) == "-2"


def test_complex_conversion():
    assert complex(gq(Fraction(1, 2), 3)) == 0.5 + 3j
