"""Sparse multivariate polynomials over an exact field.

A polynomial is a mapping from exponent tuples to nonzero coefficients.
Variables are indexed; the :class:`Ring` descriptor says how many of them
are ``x`` variables and how many are extension ``y`` variables (the ``y``
block always comes after the ``x`` block).

:class:`Polynomial` (elements of k[x]) and :class:`DiffOp` (elements of
k[dx]) share the representation but are different types and never mix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

from .fields import FieldSpec, Scalar
from .linalg import Matrix, as_matrix, is_invertible

__all__ = [
    "Ring",
    "Polynomial",
    "DiffOp",
    "Exponent",
    "poly_add",
    "poly_mul",
    "partial_derivative",
    "substitute_linear",
    "total_degree",
    "monomial_order_key",
]

Exponent = tuple[int, ...]


def monomial_order_key(e: Exponent):
    """Sort key putting exponents in graded-lex order, largest first."""
    return (-sum(e), tuple(-k for k in e))


@dataclass(frozen=True)
class Ring:
    """k[x1..xn, y1..yN]: coefficient field plus variable layout."""

    field: FieldSpec
    n: int
    N: int = 0

    def __post_init__(self):
        if self.n < 0 or self.N < 0:
            raise ValueError("variable counts must be nonnegative")

    @property
    def dim(self) -> int:
        return self.n + self.N

    def extended(self, N: int) -> Ring:
        return Ring(self.field, self.n, N)

    def var_name(self, index: int, prefix: str = "") -> str:
        """Name of the 0-based variable ``index``: ``x1``, ``y2``, or ``dx1`` with prefix ``d``."""
        if index < self.n:
            return f"{prefix}x{index + 1}"
        return f"{prefix}y{index - self.n + 1}"

    def unit(self, index: int) -> Exponent:
        return tuple(1 if k == index else 0 for k in range(self.dim))

    @property
    def zero_exponent(self) -> Exponent:
        return (0,) * self.dim


class _Sparse:
    """Commutative sparse polynomial; base for Polynomial and DiffOp."""

    __slots__ = ("ring", "_terms", "_hash")
    _prefix = ""

    def __init__(self, ring: Ring, terms: Mapping[Sequence[int], object] | None = None):
        clean: dict[Exponent, Scalar] = {}
        field = ring.field
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != ring.dim or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e} for a ring of dimension {ring.dim}")
            c = field.coerce(c)
            if e in clean:
                c = clean[e] + c
            if c:
                clean[e] = c
            else:
                clean.pop(e, None)
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _make(cls, ring: Ring, terms: dict):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    # construction helpers

    @classmethod
    def zero(cls, ring: Ring):
        return cls._make(ring, {})

    @classmethod
    def constant(cls, ring: Ring, c=1):
        c = ring.field.coerce(c)
        return cls._make(ring, {ring.zero_exponent: c} if c else {})

    @classmethod
    def one(cls, ring: Ring):
        return cls.constant(ring, 1)

    @classmethod
    def monomial(cls, ring: Ring, exponent: Sequence[int], c=1):
        return cls(ring, {tuple(exponent): c})

    @classmethod
    def variable(cls, ring: Ring, index: int):
        """The 0-based generator ``index``."""
        if not 0 <= index < ring.dim:
            raise IndexError(f"variable index {index} out of range for dimension {ring.dim}")
        return cls._make(ring, {ring.unit(index): ring.field.one})

    # accessors

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    @property
    def dim(self) -> int:
        return self.ring.dim

    @property
    def terms(self) -> Mapping[Exponent, Scalar]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Exponent, Scalar]]:
        return sorted(self._terms.items(), key=lambda t: monomial_order_key(t[0]))

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, index: int) -> int:
        if not self._terms:
            return -1
        return max(e[index] for e in self._terms)

    def coefficient(self, exponent: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(exponent), self.field.zero)

    def constant_term(self) -> Scalar:
        return self.coefficient(self.ring.zero_exponent)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    # arithmetic

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _is_scalar(self, other) -> bool:
        return not isinstance(other, _Sparse) and self._coerce_or_none(other) is not None

    def _coerce_or_none(self, other):
        try:
            return self.field.coerce(other)
        except (TypeError, ZeroDivisionError):
            return None

    def __add__(self, other):
        if self._is_scalar(other):
            other = type(self).constant(self.ring, other)
        elif not isinstance(other, _Sparse):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out[e] + c if e in out else c
            if v:
                out[e] = v
            else:
                del out[e]
        return self._make(self.ring, out)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return self._make(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if self._is_scalar(other):
            other = type(self).constant(self.ring, other)
        elif not isinstance(other, _Sparse):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.field.coerce(c)
        if not c:
            return self.zero(self.ring)
        return self._make(self.ring, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if self._is_scalar(other):
            return self.scale(other)
        if not isinstance(other, _Sparse):
            return NotImplemented
        self._check(other)
        out: dict[Exponent, Scalar] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                if e in out:
                    v = out[e] + v
                    if v:
                        out[e] = v
                    else:
                        del out[e]
                elif v:
                    out[e] = v
        return self._make(self.ring, out)

    def __rmul__(self, other):
        if self._is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = type(self).one(self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if type(other) is type(self):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, _Sparse):
            return False
        c = self._coerce_or_none(other)
        if c is None:
            return NotImplemented
        return self == type(self).constant(self.ring, c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.ring, frozenset(self._terms.items())))
        return self._hash

    # ring maps

    def embed(self, ring: Ring):
        """Pad exponents with zeros to live in a larger ring over the same field."""
        if ring.field != self.field or ring.dim < self.dim:
            raise ValueError(f"cannot embed {self.ring} into {ring}")
        pad = (0,) * (ring.dim - self.dim)
        return self._make(ring, {e + pad: c for e, c in self._terms.items()})

    def restrict(self, ring: Ring):
        """Inverse of :meth:`embed`; the dropped variables must not occur."""
        if ring.field != self.field or ring.dim > self.dim:
            raise ValueError(f"cannot restrict {self.ring} to {ring}")
        out = {}
        for e, c in self._terms.items():
            if any(e[ring.dim:]):
                raise ValueError("polynomial involves variables outside the target ring")
            out[e[: ring.dim]] = c
        return self._make(ring, out)

    def derivative(self, index: int):
        """Formal partial derivative in the 0-based variable ``index``."""
        if not 0 <= index < self.dim:
            raise IndexError(f"variable index {index} out of range for dimension {self.dim}")
        out = {}
        for e, c in self._terms.items():
            k = e[index]
            if k == 0:
                continue
            v = c * k
            if v:
                out[e[:index] + (k - 1,) + e[index + 1:]] = v
        return self._make(self.ring, out)

    def substitute(self, matrix: Sequence[Sequence], ring: Ring | None = None):
        """Replace variable ``j`` by the linear form in column ``j`` of ``matrix``."""
        return _substitute(self, matrix, ring)

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def __str__(self):
        from .expr import format_expr

        return format_expr(self)


class Polynomial(_Sparse):
    """An element of k[x1..xn, y1..yN]."""

    __slots__ = ()


class DiffOp(_Sparse):
    """A constant-coefficient differential operator, a polynomial in dx1..dxn, dy1..dyN."""

    __slots__ = ()
    _prefix = "d"

    @classmethod
    def partial(cls, ring: Ring, index: int) -> DiffOp:
        return cls.variable(ring, index)

    def as_polynomial(self) -> Polynomial:
        return Polynomial._make(self.ring, dict(self._terms))

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> DiffOp:
        return cls._make(p.ring, dict(p._terms))


def _substitute(f: _Sparse, matrix, ring: Ring | None):
    target = ring or f.ring
    if target.field != f.field:
        raise ValueError("field mismatch in substitution")
    if target.dim < f.dim:
        raise ValueError("target ring is smaller than the source ring")
    m: Matrix = as_matrix(matrix, f.field)
    if len(m) != target.dim:
        raise ValueError(f"matrix has size {len(m)}, target ring has dimension {target.dim}")
    if not is_invertible(m, f.field):
        raise ValueError("singular substitution matrix")
    cls = type(f)
    images = []
    for j in range(f.dim):
        images.append(cls(target, {target.unit(i): m[i][j] for i in range(target.dim)}))
    powers: dict[tuple[int, int], _Sparse] = {}

    def power(j: int, k: int):
        key = (j, k)
        if key not in powers:
            powers[key] = images[j] ** k
        return powers[key]

    result = cls.zero(target)
    for e, c in f._terms.items():
        term = cls.constant(target, c)
        for j, k in enumerate(e):
            if k:
                term = term * power(j, k)
        result = result + term
    return result


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    """d f / d x_i with ``i`` counted from 1."""
    if not 1 <= i <= f.dim:
        raise IndexError(f"variable index {i} out of range 1..{f.dim}")
    return f.derivative(i - 1)


def substitute_linear(
    f: Polynomial, matrix: Sequence[Sequence], target: Ring | int | None = None
) -> Polynomial:
    """Linear change of variables; ``f`` is first padded into ``target`` if that is larger.

    ``target`` may be a :class:`Ring` or just a dimension, in which case the
    extra variables are taken to be ``y`` variables.
    """
    if isinstance(target, int):
        if target < f.ring.n:
            raise ValueError("target dimension smaller than the number of x variables")
        target = Ring(f.field, f.ring.n, target - f.ring.n)
    return _substitute(f, matrix, target)


def total_degree(f: _Sparse) -> int:
    return f.total_degree()


def falling(a: int, b: int) -> int:
    """a (a-1) ... (a-b+1)."""
    return math.perm(a, b)

