import random

import pytest

from gvc import (
    GF,
    QQ,
    QQI,
    DiffOp,
    Polynomial,
    Ring,
    WeylElement,
    act,
    fourier_automorphism,
    gvc_expression_as_weyl,
    in_left_ideal_partials,
    parse,
    reorder_partials_left,
    weyl_mul,
)
from gvc.generators import random_polynomial, random_weyl
from gvc.weyl import from_partials_left
from oracles import act_by_words, rewrite_mul

R1, R2 = Ring(QQ, 1), Ring(QQ, 2)
X, Dd = WeylElement.x, WeylElement.d


def W(text, n=1, field=QQ):
    return parse(text, field, n, want="weyl")


def P(text, n=1, field=QQ):
    return parse(text, field, n, want="poly")


def test_mul_examples():
    assert weyl_mul(Dd(R1, 0), X(R1, 0)) == WeylElement(R1, {((1,), (1,)): 1, ((0,), (0,)): 1})
    assert weyl_mul(Dd(R2, 0), X(R2, 1)) == WeylElement(R2, {((0, 1), (1, 0)): 1})
    assert weyl_mul(Dd(R1, 0) ** 2, X(R1, 0)) == WeylElement(
        R1, {((1,), (2,)): 1, ((0,), (1,)): 2}
    )


def test_mul_matches_rewriting_oracle():
    rng = random.Random(31)
    for field in (QQ, QQI, GF(3)):
        for _ in range(40):
            ring = Ring(field, rng.randint(1, 2))
            a, b = random_weyl(rng, ring, 3, 3), random_weyl(rng, ring, 3, 3)
            assert weyl_mul(a, b) == rewrite_mul(a, b)


def test_act_examples():
    assert act(W("x1*dx1"), P("x1")) == P("x1")
    assert act(W("dx1*x1"), P("1")) == P("1")
    assert act(W("dx1^2"), P("x1^3")) == P("6*x1")


def test_act_matches_oracle():
    rng = random.Random(32)
    for _ in range(60):
        ring = Ring(QQ, rng.randint(1, 3))
        E = random_weyl(rng, ring, 3, 4)
        f = random_polynomial(rng, ring, 4, 4)
        assert act(E, f) == act_by_words(E, f)


def test_ideal_examples():
    assert in_left_ideal_partials(W("x1*dx1"))
    assert not in_left_ideal_partials(W("x1"))
    assert not in_left_ideal_partials(W("dx1*x1"))


def test_fourier_examples():
    phi = fourier_automorphism
    assert phi(X(R1, 0)) == Dd(R1, 0)
    assert phi(Dd(R1, 0)) == -X(R1, 0)
    assert phi(W("x1*dx1")) == W("-x1*dx1 - 1")


def test_reorder_examples():
    D1 = DiffOp.partial(R1, 0)
    assert reorder_partials_left(W("x1*dx1")) == [(D1, P("x1")), (DiffOp.one(R1), P("-1"))]
    assert reorder_partials_left(W("dx1")) == [(D1, P("1"))]
    assert reorder_partials_left(W("x1")) == [(DiffOp.one(R1), P("x1"))]


def test_reorder_pairs_rebuild_the_element_by_rewriting():
    rng = random.Random(33)
    for _ in range(40):
        ring = Ring(QQ, rng.randint(1, 2))
        E = random_weyl(rng, ring, 3, 3)
        total = WeylElement.zero(ring)
        for op, poly in reorder_partials_left(E):
            total = total + rewrite_mul(WeylElement.from_diffop(op), WeylElement.from_polynomial(poly))
        assert total == E
        assert from_partials_left(reorder_partials_left(E), ring) == E


def test_gvc_expression_examples():
    L1 = DiffOp.partial(R2, 0)
    L2 = DiffOp.partial(R2, 1)
    one, x1 = Polynomial.one(R2), P("x1", 2)
    E = gvc_expression_as_weyl(L1, 1, one, x1)
    assert E == W("x1*dx1 + 1", 2) and not in_left_ideal_partials(E)
    E = gvc_expression_as_weyl(L2, 1, one, x1)
    assert E == W("x1*dx2", 2) and in_left_ideal_partials(E)
    E = gvc_expression_as_weyl(L1, 0, one, one)
    assert E == WeylElement.one(R2) and not in_left_ideal_partials(E)


def test_gvc_expression_action_on_one():
    rng = random.Random(34)
    for _ in range(30):
        L = parse("dx1 + 2*dx1*dx2", QQ, 2, want="op")
        g = random_polynomial(rng, R2, 2, 2)
        f = random_polynomial(rng, R2, 2, 2)
        m = rng.randint(0, 2)
        E = gvc_expression_as_weyl(L, m, g, f)
        from gvc import apply_power

        assert act(E, Polynomial.one(R2)) == apply_power(L, m, g * f ** m)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        weyl_mul(X(R1, 0), X(R2, 0))


def test_d_free_part():
    E = W("x1^2*dx1 + 3*x1 - 2")
    assert E.d_free_part() == P("3*x1 - 2")
