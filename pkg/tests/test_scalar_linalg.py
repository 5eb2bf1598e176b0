from fractions import Fraction

import pytest

from holantlab.linalg import (DimensionError, determinant, determinant_laplace, pfaffian, pfaffian_integer,
                              perm_det_mod2_check, permanent, permanent_mod, permanent_naive)
from holantlab.scalar import ModScalar, Scalar, parse_rational, rational_to_str


def test_rational_text_round_trip():
    for q in (Fraction(0), Fraction(-7, 3), Fraction(5)):
        assert parse_rational(rational_to_str(q)) == q
    assert rational_to_str(Fraction(4, 2)) == "2"
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("x")


def test_gaussian_arithmetic():
    i = Scalar(0, 1)
    assert i * i == -1
    assert (1 + i) * (1 - i) == 2
    assert Scalar(3, 4) / Scalar(3, 4) == 1
    assert Scalar(1, 1) ** -2 == Scalar(0, Fraction(-1, 2))
    assert Scalar(2) == Fraction(2) and hash(Scalar(2)) == hash(Fraction(2))
    with pytest.raises(ZeroDivisionError):
        Scalar(1) / Scalar(0)


def test_scalar_json_round_trip():
    for s in (Scalar(0), Scalar(Fraction(-1, 3)), Scalar(2, Fraction(5, 7))):
        assert Scalar.from_json(s.to_json()) == s


def test_scalar_refuses_floats():
    with pytest.raises(TypeError):
        Scalar.coerce(1.5)


def test_mod_ring():
    a = ModScalar(5, 3)
    assert a + 6 == 3
    assert a * 6 == 6
    assert (-a).value == 3
    assert ModScalar(2, 3) ** 3 == 0
    with pytest.raises(TypeError):
        a / 2
    with pytest.raises(ValueError):
        a + ModScalar(1, 4)


def test_determinant_and_pfaffian():
    m = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    assert determinant(m) == 4 == determinant_laplace(m)
    a = [[0, 1, 2, 3], [-1, 0, 4, 5], [-2, -4, 0, 6], [-3, -5, -6, 0]]
    # af - be + cd for the upper triangle a..f = 1..6
    assert pfaffian(a) == 1 * 6 - 2 * 5 + 3 * 4
    assert pfaffian(a) ** 2 == determinant(a)
    assert pfaffian_integer(a) == 8
    with pytest.raises(DimensionError):
        pfaffian([[0]])
    with pytest.raises(DimensionError):
        determinant([[1, 2]])


def test_permanent():
    assert permanent([]) == 1
    assert permanent([[1] * 4 for _ in range(4)]) == 24
    m = [[1, 2], [3, Scalar(0, 1)]]
    assert permanent(m) == permanent_naive(m) == Scalar(6, 1)
    ones = [[1] * 5 for _ in range(5)]
    assert permanent_mod(ones, 8) == 120 % 8
    assert perm_det_mod2_check([[1, 1], [1, 1]])
