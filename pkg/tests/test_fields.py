from fractions import Fraction

import pytest

from gvc import GF, QQ, QQI, FieldSpec, GaussianRational, Residue
from gvc.fields import is_prime


def test_parse_field_names():
    assert FieldSpec.parse("q") == QQ
    assert FieldSpec.parse("qi") == QQI
    assert FieldSpec.parse("fp:7") == GF(7)
    assert str(GF(7)) == "fp:7"


@pytest.mark.parametrize("text", ["", "r", "fp:4", "fp:1", "fp:x", "fp:"])
def test_parse_field_rejects(text):
    with pytest.raises(ValueError):
        FieldSpec.parse(text)


def test_characteristic():
    assert QQ.characteristic == 0
    assert QQI.characteristic == 0
    assert GF(5).characteristic == 5


def test_is_prime():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_residue_arithmetic():
    a, b = Residue(3, 5), Residue(4, 5)
    assert a + b == Residue(2, 5)
    assert a * b == 2
    assert a - b == 4
    assert a / b == a * b.inverse()
    assert b.inverse() * b == 1
    assert a ** 4 == 1
    assert not Residue(10, 5)


def test_residue_rejects_other_modulus():
    with pytest.raises((TypeError, ValueError)):
        Residue(1, 5) + Residue(1, 7)


def test_residue_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        Residue(0, 3).inverse()


def test_gaussian_arithmetic():
    i = QQI.imaginary_unit
    assert i * i == -1
    z = GaussianRational(Fraction(1, 2), 3)
    assert z * z.inverse() == 1
    assert (z + z.conjugate()) == 1
    assert z.norm() == Fraction(37, 4)
    assert str(GaussianRational(1, -2)) in ("1 - 2*i", "1 + -2*i")


def test_coerce_fraction_into_prime_field():
    assert GF(5).coerce(Fraction(1, 2)) == 3
    with pytest.raises(ZeroDivisionError):
        GF(5).coerce(Fraction(1, 5))


def test_imaginary_unit_only_over_qi():
    with pytest.raises(ValueError):
        QQ.imaginary_unit
