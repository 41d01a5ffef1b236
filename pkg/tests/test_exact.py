"""Arithmetic in Q(i, sqrt2) and the radical extension used by su(2) matrices."""

from gmpy2 import mpq
from hypothesis import given

from resonanza.exact import I, ONE, ZERO, ExactComplex, RadicalComplex, format_rational, to_mpq

from conftest import gaussian


def test_lowest_terms_and_sign():
    c = ExactComplex(mpq(4, -6), 2)
    assert c.re == mpq(-2, 3)
    assert c.re.denominator > 0
    assert format_rational(c.re) == "-2/3"
    assert format_rational(3) == "3/1"


def test_i_squared():
    assert I * I == -ONE
    assert not (I * I + ONE)


def test_sqrt2_squares_to_two():
    s2 = ExactComplex(0, 0, 1, 0)
    assert s2.has_sqrt2
    assert s2 * s2 == ExactComplex(2)
    assert not (s2 * s2).has_sqrt2


def test_to_mpq_accepts_strings():
    assert to_mpq("3/4") == mpq(3, 4)
    assert to_mpq(5) == mpq(5)


@given(gaussian, gaussian, gaussian)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


@given(gaussian)
def test_conjugation(a):
    assert a.conjugate().conjugate() == a
    assert (a * a.conjugate()).is_real


def test_zero_is_exact():
    assert ZERO.is_zero
    assert not ExactComplex(mpq(1, 3)) - ExactComplex(mpq(2, 6))


def test_fields_roundtrip():
    c = ExactComplex(mpq(1, 2), -3, mpq(5, 7), 0)
    assert ExactComplex.from_fields(c.fields()) == c


def test_radicals_are_independent():
    assert RadicalComplex.sqrt(2) != RadicalComplex.sqrt(3)
    assert RadicalComplex.sqrt(12) == RadicalComplex.sqrt(3, 2)
    assert RadicalComplex.sqrt(2) * RadicalComplex.sqrt(6) == RadicalComplex.sqrt(3, 2)
    assert RadicalComplex.sqrt(mpq(1, 2)) * RadicalComplex.sqrt(2) == RadicalComplex.coerce(1)
    assert (RadicalComplex.sqrt(5) - RadicalComplex.sqrt(5)).is_zero()
