"""Seeded random instances for the property batteries and the experiment harness.

Coefficients are drawn from -3..3 (integer parts, both parts over Q(i)) or
uniformly from F_p; degrees and dimensions are kept at desk scale.
"""

from __future__ import annotations

import random
from itertools import product

from .fields import FieldSpec
from .linalg import Matrix, is_invertible
from .polynomials import DiffOp, Polynomial, Ring
from .reduction import LinearForm
from .weyl import WeylElement

COEFF_BOUND = 3


def _exponents(dim: int, max_degree: int) -> list[tuple[int, ...]]:
    return [e for e in product(range(max_degree + 1), repeat=dim) if sum(e) <= max_degree]


def random_terms(rng: random.Random, ring: Ring, max_degree: int, max_terms: int, caps=None) -> dict:
    pool = _exponents(ring.dim, max_degree)
    if caps is not None:
        pool = [e for e in pool if all(k <= c for k, c in zip(e, caps))]
    count = rng.randint(1, max_terms)
    chosen = rng.sample(pool, min(count, len(pool)))
    return {e: ring.field.random_nonzero(rng, COEFF_BOUND) for e in chosen}


def random_polynomial(rng, ring: Ring, max_degree: int = 3, max_terms: int = 4, caps=None) -> Polynomial:
    return Polynomial(ring, random_terms(rng, ring, max_degree, max_terms, caps))


def random_diffop(rng, ring: Ring, max_degree: int = 3, max_terms: int = 4) -> DiffOp:
    return DiffOp(ring, random_terms(rng, ring, max_degree, max_terms))


def random_nonzero_polynomial(rng, ring: Ring, max_degree: int = 3, max_terms: int = 4, caps=None) -> Polynomial:
    while True:
        f = random_polynomial(rng, ring, max_degree, max_terms, caps)
        if f:
            return f


def random_constant_free_diffop(rng, ring: Ring, max_degree: int = 3, max_terms: int = 4) -> DiffOp:
    while True:
        L = random_diffop(rng, ring, max_degree, max_terms)
        L = L - L.constant_term()
        if L:
            return L


def random_weyl(rng, ring: Ring, max_degree: int = 3, max_terms: int = 4) -> WeylElement:
    """Random element of A_n(k); ``max_degree`` bounds the x-degree and the d-degree separately."""
    pool = _exponents(ring.dim, max_degree)
    count = rng.randint(1, max_terms)
    terms = {}
    for _ in range(count):
        terms[(rng.choice(pool), rng.choice(pool))] = ring.field.random_nonzero(rng, COEFF_BOUND)
    return WeylElement(ring, terms)


def random_invertible_matrix(rng, field: FieldSpec, size: int) -> Matrix:
    while True:
        m = tuple(
            tuple(field.random_element(rng, COEFF_BOUND) for _ in range(size)) for _ in range(size)
        )
        if is_invertible(m, field):
            return m


def random_linear_form(rng, field: FieldSpec, n: int) -> LinearForm:
    while True:
        form = LinearForm(field, tuple(field.random_element(rng, COEFF_BOUND) for _ in range(n)))
        if not form.is_zero():
            return form


def theorem1_instance(rng, field: FieldSpec, n: int | None = None):
    """A Theorem 1 instance whose hypothesis holds by construction.

    ``L`` is divisible by a designated partial ``d_i``, so each application
    lowers the x_i-degree; ``f~`` has x_i-degree below ``m - d``. When
    ``m = d`` the only admissible ``f~`` is zero.

    Returns ``(L, f_tilde, g, m, d)``.
    """
    n = n or rng.randint(1, 3)
    ring = Ring(field, n)
    i = rng.randrange(n)
    # a nonzero constant in the cofactor keeps a first-order d_i term in L,
    # so the x_i-degree drops slowly and the bound m - d is actually tight
    rest = random_diffop(rng, ring, max_degree=2, max_terms=3)
    rest = rest - rest.constant_term() + field.random_nonzero(rng, COEFF_BOUND)
    L = DiffOp.partial(ring, i) * rest
    g = random_polynomial(rng, ring, max_degree=3, max_terms=4)
    d = max(g.total_degree(), 0)
    m = d + rng.randint(0, 4)
    if m == d:
        f_tilde = Polynomial.zero(ring)
    else:
        top = m - d - 1
        caps = [3] * n
        caps[i] = top
        f_tilde = random_polynomial(rng, ring, max_degree=4, max_terms=3, caps=caps)
        lead = [rng.randint(0, 1) for _ in range(n)]
        lead[i] = top
        f_tilde = f_tilde + Polynomial.monomial(ring, lead, field.random_nonzero(rng, COEFF_BOUND))
    return L, f_tilde, g, m, d
