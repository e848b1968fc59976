"""Slow reference implementations used to cross-check the library.

None of these share code paths with the package beyond the basic
Polynomial container and single-variable differentiation.
"""

from __future__ import annotations

from collections import defaultdict

from gvc import DiffOp, Polynomial, WeylElement


def apply_by_derivatives(L: DiffOp, f: Polynomial) -> Polynomial:
    """``L f`` one partial derivative at a time."""
    total = Polynomial.zero(f.ring)
    for beta, c in L.terms.items():
        h = f
        for i, b in enumerate(beta):
            for _ in range(b):
                h = h.derivative(i)
        total = total + h.scale(c)
    return total


def power_apply_by_derivatives(L: DiffOp, m: int, f: Polynomial) -> Polynomial:
    for _ in range(m):
        f = apply_by_derivatives(L, f)
    return f


def _word(key) -> tuple:
    xs, ds = key
    word = []
    for i, a in enumerate(xs):
        word += [("x", i)] * a
    for i, b in enumerate(ds):
        word += [("d", i)] * b
    return tuple(word)


def _normal_key(word, dim):
    xs, ds = [0] * dim, [0] * dim
    for letter, i in word:
        (xs if letter == "x" else ds)[i] += 1
    return tuple(xs), tuple(ds)


def rewrite_mul(A: WeylElement, B: WeylElement) -> WeylElement:
    """Weyl product by repeatedly rewriting ``d_i x_j -> x_j d_i + delta_ij``.

    Works on words: a word is in normal order once no ``d`` precedes an ``x``.
    Letters of the same kind commute, so sorting is not needed.
    """
    ring = A.ring
    pending = defaultdict(lambda: 0)
    for ka, ca in A.terms.items():
        for kb, cb in B.terms.items():
            pending[_word(ka) + _word(kb)] += ca * cb
    done = defaultdict(lambda: 0)
    while pending:
        word, c = pending.popitem()
        if not c:
            continue
        pos = next(
            (k for k in range(len(word) - 1) if word[k][0] == "d" and word[k + 1][0] == "x"),
            None,
        )
        if pos is None:
            done[_normal_key(word, ring.dim)] += c
            continue
        (_, i), (_, j) = word[pos], word[pos + 1]
        swapped = word[:pos] + (word[pos + 1], word[pos]) + word[pos + 2:]
        pending[swapped] += c
        if i == j:
            pending[word[:pos] + word[pos + 2:]] += c
    return WeylElement(ring, {k: v for k, v in done.items() if v})


def act_by_words(E: WeylElement, f: Polynomial) -> Polynomial:
    """``E f`` for normal-ordered ``E``: differentiate, then multiply by x^a."""
    total = Polynomial.zero(f.ring)
    for (xs, ds), c in E.terms.items():
        h = apply_by_derivatives(DiffOp.monomial(f.ring, ds), f)
        total = total + (Polynomial.monomial(f.ring, xs) * h).scale(c)
    return total


def stabilization_by_brute_force(L: DiffOp, f: Polynomial, g: Polynomial, M: int):
    """Per-m ``(hypothesis, conclusion)`` pairs and the index, recomputed from scratch."""
    rows = []
    for m in range(1, M + 1):
        fm = f ** m
        rows.append(
            (
                not power_apply_by_derivatives(L, m, fm),
                not power_apply_by_derivatives(L, m, g * fm),
            )
        )
    index = None
    for m in range(M, 0, -1):
        if not rows[m - 1][1]:
            break
        index = m
    return rows, index
