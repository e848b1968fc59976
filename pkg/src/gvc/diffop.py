"""Constant-coefficient differential operators acting on polynomials.

Includes the commutator calculus ``[L, g] f = L(g f) - g (L f)``, an explicit
decomposition of that commutator into terms ``L*(g* f)`` with ``deg g* < deg g``,
and an instance checker for the degree-shift vanishing theorem
(``L^(m-d) f~ = 0`` and ``deg g <= d`` imply ``L^m (g f~) = 0``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import SoundnessError
from .polynomials import DiffOp, Exponent, Polynomial, falling, monomial_order_key

__all__ = [
    "apply",
    "apply_power",
    "commutator_action",
    "commutator_decompose",
    "Decomposition",
    "Theorem1Report",
    "verify_theorem1",
]


def _check_pair(L: DiffOp, f: Polynomial) -> None:
    if not isinstance(L, DiffOp) or not isinstance(f, Polynomial):
        raise TypeError("expected a DiffOp and a Polynomial")
    if L.ring != f.ring:
        raise ValueError(f"ring mismatch: operator over {L.ring}, polynomial over {f.ring}")


def apply(L: DiffOp, f: Polynomial) -> Polynomial:
    """Act with ``L`` on ``f``."""
    _check_pair(L, f)
    if not f._terms:
        return f
    top = [max(col) for col in zip(*f._terms)]
    ops = [(beta, c) for beta, c in L._terms.items() if all(b <= t for b, t in zip(beta, top))]
    out: dict[Exponent, object] = {}
    for beta, c in ops:
        for alpha, a in f._terms.items():
            coef = 1
            for ai, bi in zip(alpha, beta):
                if ai < bi:
                    break
                if bi:
                    coef *= falling(ai, bi)
            else:
                e = tuple(ai - bi for ai, bi in zip(alpha, beta))
                v = a * c * coef
                if e in out:
                    v = out[e] + v
                out[e] = v
    return Polynomial._make(f.ring, {e: v for e, v in out.items() if v})


def apply_power(L: DiffOp, m: int, f: Polynomial, *, expand: bool = False) -> Polynomial:
    """``L^m f``, by ``m`` successive applications.

    ``expand=True`` forms ``L^m`` first and applies it once; it exists to
    cross-check the iterated route and is much slower for large ``m``.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    _check_pair(L, f)
    if expand:
        return apply(L ** m, f)
    for _ in range(m):
        if not f:
            break
        f = apply(L, f)
    return f


def commutator_action(L: DiffOp, g: Polynomial, f: Polynomial) -> Polynomial:
    """``L(g f) - g (L f)``."""
    _check_pair(L, g)
    _check_pair(L, f)
    return apply(L, g * f) - g * apply(L, f)


@dataclass(frozen=True)
class Decomposition:
    """A witness ``sum_t op_t(poly_t * f~)`` for ``[L, g] f~``, valid for every ``f~``."""

    pairs: tuple[tuple[DiffOp, Polynomial], ...]
    degree_bound: int

    def __post_init__(self):
        for _, poly in self.pairs:
            if poly.total_degree() > self.degree_bound:
                raise ValueError("decomposition term exceeds its degree bound")

    def evaluate(self, f_tilde: Polynomial) -> Polynomial:
        total = Polynomial.zero(f_tilde.ring)
        for op, poly in self.pairs:
            total = total + apply(op, poly * f_tilde)
        return total

    def __len__(self):
        return len(self.pairs)


@lru_cache(maxsize=4096)
def _monomial_commutator(alpha: Exponent, g: Polynomial) -> tuple[tuple[DiffOp, Polynomial], ...]:
    # [d^a, g] = d_i [d^â, g] + d^â (g_i .) - [d^â, g_i], i = first index with a_i > 0
    ring = g.ring
    i = next((k for k, a in enumerate(alpha) if a), None)
    if i is None or not g:
        return ()
    alpha_hat = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
    d_i = DiffOp.partial(ring, i)
    g_i = g.derivative(i)
    pairs = [(d_i * op, poly) for op, poly in _monomial_commutator(alpha_hat, g)]
    if g_i:
        pairs.append((DiffOp.monomial(ring, alpha_hat), g_i))
        pairs.extend((-op, poly) for op, poly in _monomial_commutator(alpha_hat, g_i))
    return tuple(pairs)


def commutator_decompose(L: DiffOp, g: Polynomial) -> Decomposition:
    """Split ``[L, g]`` into operator/multiplier pairs with multipliers of degree below ``deg g``.

    Pairs sharing a multiplier are merged by adding their operators, and
    pairs whose operator cancels to zero are dropped.
    """
    _check_pair(L, g)
    merged: dict[Polynomial, DiffOp] = {}
    for alpha, c in sorted(L._terms.items(), key=lambda t: monomial_order_key(t[0])):
        for op, poly in _monomial_commutator(alpha, g):
            op = op.scale(c)
            merged[poly] = merged[poly] + op if poly in merged else op
    pairs = tuple((op, poly) for poly, op in merged.items() if op)
    return Decomposition(pairs, g.total_degree() - 1)


@dataclass(frozen=True)
class Theorem1Report:
    m: int
    d: int
    hypothesis_holds: bool
    conclusion_holds: bool | None

    @property
    def sound(self) -> bool:
        return not self.hypothesis_holds or bool(self.conclusion_holds)


def verify_theorem1(
    L: DiffOp,
    f_tilde: Polynomial,
    g: Polynomial,
    m: int,
    d: int,
    *,
    strict: bool = True,
) -> Theorem1Report:
    """Check one instance of: ``L^(m-d) f~ = 0`` and ``deg g <= d`` imply ``L^m (g f~) = 0``.

    The conclusion is only evaluated when the hypothesis holds. With
    ``strict`` a violated instance raises :class:`SoundnessError`.
    """
    _check_pair(L, f_tilde)
    _check_pair(L, g)
    if d < 0 or m < d:
        raise ValueError(f"need 0 <= d <= m, got d={d}, m={m}")
    if g.total_degree() > d:
        raise ValueError(f"deg g = {g.total_degree()} exceeds d = {d}")
    hypothesis = not apply_power(L, m - d, f_tilde)
    conclusion = None
    if hypothesis:
        conclusion = not apply_power(L, m, g * f_tilde)
    report = Theorem1Report(m, d, hypothesis, conclusion)
    if strict and not report.sound:
        raise SoundnessError(
            f"theorem 1 violated: L={L}, f~={f_tilde}, g={g}, m={m}, d={d}"
        )
    return report
