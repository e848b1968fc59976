from fractions import Fraction

import pytest

from gvc import (
    GF,
    QQ,
    QQI,
    DiffOp,
    Polynomial,
    Ring,
    parse,
    partial_derivative,
    poly_add,
    poly_mul,
    substitute_linear,
    total_degree,
)
from gvc.polynomials import monomial_order_key

R2 = Ring(QQ, 2)


def P(text, field=QQ, n=2, N=0):
    return parse(text, field, n, N, want="poly")


def test_add_cancels():
    assert poly_add(P("x1 + x2"), P("-x1")) == P("x2")


def test_add_zero_identity():
    f = P("x1^2 - 3*x2")
    assert poly_add(f, Polynomial.zero(R2)) == f


def test_add_like_terms():
    assert poly_add(P("2*x1^2"), P("3*x1^2")) == P("5*x1^2")


def test_mul_difference_of_squares():
    assert poly_mul(P("x1 + x2"), P("x1 - x2")) == P("x1^2 - x2^2")


def test_mul_one_identity():
    f = P("x1*x2 + 7")
    assert poly_mul(f, Polynomial.one(R2)) == f


def test_mul_gaussian_conjugates():
    a = P("x1 + i*x2", QQI)
    b = P("x1 - i*x2", QQI)
    # termwise: x1^2 - i x1x2 + i x1x2 - i^2 x2^2
    expected = Polynomial(Ring(QQI, 2), {(2, 0): 1, (0, 2): 1})
    assert poly_mul(a, b) == expected


def test_partial_derivative():
    assert partial_derivative(P("x1^2*x2"), 1) == P("2*x1*x2")
    assert partial_derivative(P("x2^3"), 1) == Polynomial.zero(R2)


def test_partial_derivative_char3_kills_cube():
    f = P("x1^3", GF(3), 1)
    assert partial_derivative(f, 1) == Polynomial.zero(Ring(GF(3), 1))


@pytest.mark.parametrize("i", [0, 3])
def test_partial_derivative_index_range(i):
    with pytest.raises(IndexError):
        partial_derivative(P("x1"), i)


def test_substitute_identity():
    assert substitute_linear(P("x1"), ((1, 0), (0, 1))) == P("x1")


def test_substitute_shift_into_y():
    ring = Ring(QQ, 1, 1)
    f = parse("x1", QQ, 1, 1, want="poly")
    # variable order (x1, y1); column j is the image of variable j
    out = substitute_linear(f, ((1, 0), (-1, 1)))
    assert out == Polynomial(ring, {(1, 0): 1, (0, 1): -1})


def test_substitute_square():
    out = substitute_linear(P("x1^2"), ((1, 0), (1, 1)))
    assert out == P("x1^2 + 2*x1*x2 + x2^2")


def test_substitute_singular_matrix():
    with pytest.raises(ValueError):
        substitute_linear(P("x1"), ((1, 1), (1, 1)))


def test_substitute_embeds_into_bigger_ring():
    big = Ring(QQ, 2, 1)
    ident = tuple(tuple(int(r == c) for c in range(3)) for r in range(3))
    out = substitute_linear(P("x1*x2"), ident, big)
    assert out.ring == big
    assert out == P("x1*x2").embed(big)


def test_total_degree():
    assert total_degree(P("x1^2*x2 + x2")) == 3
    assert total_degree(P("5")) == 0
    assert total_degree(Polynomial.zero(R2)) == -1


def test_order_is_graded_lex():
    keys = [(0, 1), (2, 0), (1, 1), (0, 0), (1, 0)]
    assert sorted(keys, key=monomial_order_key) == [(2, 0), (1, 1), (1, 0), (0, 1), (0, 0)]


def test_ring_mismatch():
    with pytest.raises(ValueError):
        P("x1") + parse("x1", QQ, 3, want="poly")


def test_polynomial_and_operator_do_not_mix():
    with pytest.raises(TypeError):
        P("x1") + DiffOp.partial(R2, 0)


def test_zero_coefficients_dropped():
    f = Polynomial(R2, {(1, 0): 0, (0, 1): Fraction(1, 2)})
    assert len(f) == 1


def test_restrict_refuses_live_variable():
    big = Ring(QQ, 2, 1)
    f = parse("x1 + y1", QQ, 2, 1, want="poly")
    with pytest.raises(ValueError):
        f.restrict(R2)
    assert parse("x1", QQ, 2, 1, want="poly").restrict(R2) == P("x1")


def test_prime_field_reduction():
    f = Polynomial(Ring(GF(5), 1), {(1,): 7})
    assert f == Polynomial(Ring(GF(5), 1), {(1,): 2})
