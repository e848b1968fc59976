"""The Weyl algebra A_n(k) in x-left normal order.

Each term is ``c * x^a * d^b`` stored under the key ``(a, b)``. Products are
renormalised with the per-variable identity

    d^a x^b = sum_k C(a, k) C(b, k) k! x^(b-k) d^(a-k)

and the opposite reordering (d's to the left) uses the same identity with
alternating signs.
"""

from __future__ import annotations

from itertools import product
from math import comb, factorial
from types import MappingProxyType
from typing import Mapping

from .diffop import apply
from .polynomials import DiffOp, Exponent, Polynomial, Ring, monomial_order_key

__all__ = [
    "WeylElement",
    "weyl_mul",
    "act",
    "in_left_ideal_partials",
    "fourier_automorphism",
    "reorder_partials_left",
    "gvc_expression_as_weyl",
]

Key = tuple[Exponent, Exponent]


def _weyl_order_key(key: Key):
    a, b = key
    return monomial_order_key(a + b)


def _reorder_coefficients(a: int, b: int, sign: int) -> list[tuple[int, int]]:
    """(k, C(a,k) C(b,k) k! * sign^k) for k = 0..min(a, b)."""
    return [(k, comb(a, k) * comb(b, k) * factorial(k) * sign ** k) for k in range(min(a, b) + 1)]


class WeylElement:
    """An element of A_n(k), immutable, canonical in x-left order."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple, object] | None = None):
        field = ring.field
        clean: dict[Key, object] = {}
        for (a, b), c in (terms or {}).items():
            a, b = tuple(a), tuple(b)
            if len(a) != ring.dim or len(b) != ring.dim or min(a + b, default=0) < 0:
                raise ValueError(f"bad Weyl exponents {(a, b)} for dimension {ring.dim}")
            c = field.coerce(c)
            if (a, b) in clean:
                c = clean[(a, b)] + c
            if c:
                clean[(a, b)] = c
            else:
                clean.pop((a, b), None)
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _make(cls, ring: Ring, terms: dict) -> WeylElement:
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, ring: Ring) -> WeylElement:
        return cls._make(ring, {})

    @classmethod
    def constant(cls, ring: Ring, c=1) -> WeylElement:
        c = ring.field.coerce(c)
        z = ring.zero_exponent
        return cls._make(ring, {(z, z): c} if c else {})

    @classmethod
    def one(cls, ring: Ring) -> WeylElement:
        return cls.constant(ring, 1)

    @classmethod
    def x(cls, ring: Ring, index: int) -> WeylElement:
        return cls._make(ring, {(ring.unit(index), ring.zero_exponent): ring.field.one})

    @classmethod
    def d(cls, ring: Ring, index: int) -> WeylElement:
        return cls._make(ring, {(ring.zero_exponent, ring.unit(index)): ring.field.one})

    @classmethod
    def from_polynomial(cls, f: Polynomial) -> WeylElement:
        z = f.ring.zero_exponent
        return cls._make(f.ring, {(e, z): c for e, c in f._terms.items()})

    @classmethod
    def from_diffop(cls, L: DiffOp) -> WeylElement:
        z = L.ring.zero_exponent
        return cls._make(L.ring, {(z, e): c for e, c in L._terms.items()})

    @property
    def field(self):
        return self.ring.field

    @property
    def terms(self) -> Mapping[Key, object]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Key, object]]:
        return sorted(self._terms.items(), key=lambda t: _weyl_order_key(t[0]))

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def _check(self, other: WeylElement) -> None:
        if not isinstance(other, WeylElement):
            raise TypeError(f"cannot combine WeylElement with {type(other).__name__}")
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other):
        if isinstance(other, WeylElement):
            return other
        if isinstance(other, Polynomial):
            return WeylElement.from_polynomial(other)
        if isinstance(other, DiffOp):
            return WeylElement.from_diffop(other)
        try:
            return WeylElement.constant(self.ring, other)
        except (TypeError, ZeroDivisionError):
            return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out[k] + c if k in out else c
            if v:
                out[k] = v
            else:
                del out[k]
        return self._make(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return self._make(self.ring, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> WeylElement:
        c = self.field.coerce(c)
        if not c:
            return self.zero(self.ring)
        return self._make(self.ring, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return weyl_mul(self, other)

    def __rmul__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return weyl_mul(lifted, self)

    def __pow__(self, k: int) -> WeylElement:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = WeylElement.one(self.ring)
        for _ in range(k):
            result = weyl_mul(result, self)
        return result

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.ring == other.ring and self._terms == other._terms
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return self == lifted

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("WeylElement", self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"WeylElement({self})"

    def __str__(self):
        from .expr import format_expr

        return format_expr(self)

    def d_free_part(self) -> Polynomial:
        """The terms without any d, as a polynomial; equals ``act(self, 1)``."""
        z = self.ring.zero_exponent
        return Polynomial._make(self.ring, {a: c for (a, b), c in self._terms.items() if b == z})


def weyl_mul(E1: WeylElement, E2: WeylElement) -> WeylElement:
    """Product in A_n(k), renormalised to x-left order."""
    E1._check(E2)
    ring = E1.ring
    out: dict[Key, object] = {}
    for (a1, b1), c1 in E1._terms.items():
        for (a2, b2), c2 in E2._terms.items():
            # d^b1 x^a2 reordered variable by variable
            per_var = [_reorder_coefficients(b1[i], a2[i], 1) for i in range(ring.dim)]
            c12 = c1 * c2
            for choice in product(*per_var):
                coef = 1
                for _, w in choice:
                    coef *= w
                a = tuple(a1[i] + a2[i] - choice[i][0] for i in range(ring.dim))
                b = tuple(b1[i] - choice[i][0] + b2[i] for i in range(ring.dim))
                v = c12 * coef
                key = (a, b)
                if key in out:
                    v = out[key] + v
                out[key] = v
    return WeylElement._make(ring, {k: v for k, v in out.items() if v})


def act(E: WeylElement, f: Polynomial) -> Polynomial:
    """Module action on k[x]: ``x^a d^b`` sends ``f`` to ``x^a * (d^b f)``."""
    if not isinstance(f, Polynomial) or f.ring != E.ring:
        raise ValueError("act needs a polynomial over the same ring")
    ring = E.ring
    by_d: dict[Exponent, dict[Exponent, object]] = {}
    for (a, b), c in E._terms.items():
        by_d.setdefault(b, {})[a] = c
    total = Polynomial.zero(ring)
    for b, xs in by_d.items():
        derived = apply(DiffOp.monomial(ring, b), f)
        if derived:
            total = total + Polynomial._make(ring, dict(xs)) * derived
    return total


def in_left_ideal_partials(E: WeylElement) -> bool:
    """Membership in the left ideal generated by d1..dn: no d-free term in normal order."""
    z = E.ring.zero_exponent
    return all(b != z for (_, b) in E._terms)


def fourier_automorphism(E: WeylElement) -> WeylElement:
    """The automorphism x_i -> d_i, d_i -> -x_i."""
    ring = E.ring
    total = WeylElement.zero(ring)
    for (a, b), c in E._terms.items():
        sign = -1 if sum(b) % 2 else 1
        left = WeylElement._make(ring, {(ring.zero_exponent, a): c * sign})
        right = WeylElement._make(ring, {(b, ring.zero_exponent): ring.field.one})
        total = total + weyl_mul(left, right)
    return total


def reorder_partials_left(E: WeylElement) -> list[tuple[DiffOp, Polynomial]]:
    """Rewrite ``E`` as ``sum_t L_t * g_t`` with the operators on the left.

    One pair per d-monomial, in graded-lex order of that monomial.
    """
    ring = E.ring
    grouped: dict[Exponent, dict[Exponent, object]] = {}
    for (a, b), c in E._terms.items():
        # x^a d^b = prod_i sum_k (-1)^k C(a_i,k) C(b_i,k) k! d^(b_i-k) x^(a_i-k)
        per_var = [_reorder_coefficients(a[i], b[i], -1) for i in range(ring.dim)]
        for choice in product(*per_var):
            coef = 1
            for _, w in choice:
                coef *= w
            na = tuple(a[i] - choice[i][0] for i in range(ring.dim))
            nb = tuple(b[i] - choice[i][0] for i in range(ring.dim))
            bucket = grouped.setdefault(nb, {})
            v = c * coef
            bucket[na] = bucket[na] + v if na in bucket else v
    pairs = []
    for b in sorted(grouped, key=monomial_order_key):
        g = Polynomial(ring, grouped[b])
        if g:
            pairs.append((DiffOp.monomial(ring, b), g))
    return pairs


def from_partials_left(pairs, ring: Ring) -> WeylElement:
    """Multiply out ``sum_t L_t * g_t``; inverse of :func:`reorder_partials_left`."""
    total = WeylElement.zero(ring)
    for op, poly in pairs:
        total = total + weyl_mul(WeylElement.from_diffop(op), WeylElement.from_polynomial(poly))
    return total


def gvc_expression_as_weyl(L: DiffOp, m: int, g: Polynomial, f: Polynomial) -> WeylElement:
    """The product ``L^m * g * f^m`` in A_n(k)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if not (L.ring == g.ring == f.ring):
        raise ValueError("operator and polynomials must share a ring")
    # g * f^m is d-free, so it can be formed in k[x] first
    right = WeylElement.from_polynomial(g * f ** m)
    result = right
    op = WeylElement.from_diffop(L)
    for _ in range(m):
        result = weyl_mul(op, result)
    return result

