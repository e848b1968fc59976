"""Reduction of an operator to sums (or products) of shifted linear forms.

Every monomial ``d^a`` of degree ``d`` is a combination of ``d``-th powers of
linear forms (polarization). Given ``L = sum_t c_t l_t^(d_t)`` we introduce
one new variable ``y_t`` per summand, build

    L* = sum_t c_t (dy_t + l_t)^(d_t)      or      L* = prod_t (dy_t + l_t),

and the coordinate change ``x_i' = x_i - sum_j a_ji y_j``, ``y_j' = y_j`` turns
each ``dy_j + l_j`` into ``dy_j'``. On y-free polynomials ``L*`` acts as ``L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb, factorial
from typing import Sequence

from .diffop import apply
from .fields import FieldSpec, Scalar
from .linalg import Matrix, as_matrix, inverse, transpose
from .polynomials import DiffOp, Polynomial, Ring, _substitute, monomial_order_key

__all__ = [
    "LinearForm",
    "PowerSumDecomposition",
    "ExtendedRing",
    "polarize_monomial",
    "decompose_power_sums",
    "build_extended_operator",
    "build_extended_product",
    "transform_diffop",
    "extension_preserves_x_action",
]


@dataclass(frozen=True)
class LinearForm:
    """``a_1 dx1 + ... + a_n dxn``."""

    field: FieldSpec
    coeffs: tuple

    @classmethod
    def of(cls, field: FieldSpec, coeffs: Sequence) -> LinearForm:
        return cls(field, tuple(field.coerce(c) for c in coeffs))

    @classmethod
    def from_diffop(cls, L: DiffOp) -> LinearForm:
        """Read a homogeneous degree-one operator back as a form."""
        if any(sum(e) != 1 for e in L.terms):
            raise ValueError(f"{L} is not a linear form in the partials")
        coeffs = [L.field.zero] * L.dim
        for e, c in L.terms.items():
            coeffs[e.index(1)] = c
        return cls(L.field, tuple(coeffs))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_diffop(self, ring: Ring | None = None) -> DiffOp:
        """As an operator on ``ring`` (default: the n-variable ring); coefficients land on dx1..dxn."""
        ring = ring or Ring(self.field, self.n)
        if ring.n != self.n or ring.field != self.field:
            raise ValueError(f"form in {self.n} variables does not fit {ring}")
        return DiffOp(ring, {ring.unit(i): c for i, c in enumerate(self.coeffs) if c})

    def normalized(self) -> tuple[Scalar, LinearForm]:
        """``(lead, form/lead)`` where ``lead`` is the first nonzero coefficient."""
        lead = next(c for c in self.coeffs if c)
        return lead, LinearForm(self.field, tuple(c / lead for c in self.coeffs))

    def __str__(self):
        return str(self.to_diffop())


@dataclass(frozen=True)
class PowerSumDecomposition:
    """``sum_t c_t * l_t^(d_t)`` over ``ring``."""

    ring: Ring
    summands: tuple[tuple[Scalar, LinearForm, int], ...]

    def __post_init__(self):
        for c, form, d in self.summands:
            if not c:
                raise ValueError("power-sum coefficients must be nonzero")
            if form.n != self.ring.n or d < 0:
                raise ValueError("summand does not fit the ring")

    @property
    def N(self) -> int:
        return len(self.summands)

    def reconstruct(self) -> DiffOp:
        total = DiffOp.zero(self.ring)
        for c, form, d in self.summands:
            total = total + (form.to_diffop(self.ring) ** d).scale(c)
        return total

    def __len__(self):
        return len(self.summands)

    def __str__(self):
        parts = []
        for c, form, d in self.summands:
            parts.append(f"({c})*({form})^{d}")
        return " + ".join(parts) if parts else "0"


def _check_characteristic(field: FieldSpec, degree: int) -> None:
    p = field.characteristic
    if p and p <= degree:
        raise ValueError(f"polarization of degree {degree} needs characteristic 0 or > {degree}, got {p}")


def _merge(ring: Ring, items) -> PowerSumDecomposition:
    merged: dict[tuple, Scalar] = {}
    forms: dict[tuple, LinearForm] = {}
    for c, form, d in items:
        if d > 0:
            lead, form = form.normalized()
            c = c * lead ** d
        key = (form.coeffs, d)
        forms[key] = form
        merged[key] = merged[key] + c if key in merged else c
    return PowerSumDecomposition(
        ring, tuple((c, forms[key], key[1]) for key, c in merged.items() if c)
    )


def polarize_monomial(alpha: Sequence[int], field: FieldSpec) -> PowerSumDecomposition:
    """Write ``d^alpha`` as a combination of ``|alpha|``-th powers of linear forms.

    Uses the subset identity over the multiset of slots, where each slot is
    one factor of the monomial:

        d^alpha = 1/d! * sum over nonempty S of (-1)^(d-|S|) (sum_{s in S} d_var(s))^d

    Equal subsets (as multisets) are merged, and forms are scaled so their
    first nonzero coefficient is 1. The zero multi-index gives no summands.
    """
    alpha = tuple(alpha)
    if any(a < 0 for a in alpha):
        raise ValueError("multi-index entries must be nonnegative")
    ring = Ring(field, len(alpha))
    d = sum(alpha)
    if d == 0:
        return PowerSumDecomposition(ring, ())
    _check_characteristic(field, d)
    inv_fact = field.one / factorial(d)
    subsets = [s for s in product(*(range(a + 1) for a in alpha)) if any(s)]
    subsets.sort(key=monomial_order_key)
    items = []
    for s in subsets:
        mult = 1
        for a, k in zip(alpha, s):
            mult *= comb(a, k)
        sign = -1 if (d - sum(s)) % 2 else 1
        items.append((inv_fact * (sign * mult), LinearForm.of(field, s), d))
    return _merge(ring, items)


def decompose_power_sums(L: DiffOp) -> PowerSumDecomposition:
    """Polarize every monomial of ``L`` and collect like powers."""
    _check_characteristic(L.field, L.total_degree())
    ring = L.ring
    items = []
    zero_form = LinearForm(L.field, (L.field.zero,) * ring.n)
    for alpha, c in L.sorted_terms():
        if sum(alpha) == 0:
            items.append((c, zero_form, 0))
            continue
        for c2, form, d in polarize_monomial(alpha, L.field).summands:
            items.append((c * c2, form, d))
    return _merge(ring, items)


@dataclass(frozen=True)
class ExtendedRing:
    """k[x1..xn, y1..yN] together with the coordinate change for the forms l_1..l_N.

    ``substitution`` holds the new coordinates in terms of the old ones, one
    row per new coordinate: row ``i`` is ``x_i' = x_i - sum_j a_ji y_j`` and
    row ``n+j`` is ``y_j' = y_j``.
    """

    n: int
    N: int
    field: FieldSpec
    forms: tuple[LinearForm, ...]
    substitution: Matrix

    @classmethod
    def for_forms(cls, forms: Sequence[LinearForm]) -> ExtendedRing:
        forms = tuple(forms)
        if not forms:
            raise ValueError("need at least one linear form")
        field = forms[0].field
        n = forms[0].n
        if any(f.n != n or f.field != field for f in forms):
            raise ValueError("linear forms must share a field and dimension")
        N = len(forms)
        size = n + N
        rows = [[field.zero] * size for _ in range(size)]
        for i in range(n):
            rows[i][i] = field.one
            for j, form in enumerate(forms):
                rows[i][n + j] = -form.coeffs[i]
        for j in range(N):
            rows[n + j][n + j] = field.one
        return cls(n, N, field, forms, as_matrix(rows, field))

    @property
    def ring(self) -> Ring:
        return Ring(self.field, self.n, self.N)

    @property
    def base_ring(self) -> Ring:
        return Ring(self.field, self.n)

    def new_coordinates(self) -> list[Polynomial]:
        """The primed coordinates as polynomials in the old ones."""
        ring = self.ring
        return [
            Polynomial(ring, {ring.unit(k): c for k, c in enumerate(row) if c})
            for row in self.substitution
        ]

    def coordinate_matrix(self) -> Matrix:
        """Matrix for :func:`substitute_linear` rewriting old-coordinate polynomials in new ones."""
        return transpose(inverse(self.substitution, self.field))

    def to_new_coordinates(self, f: Polynomial) -> Polynomial:
        return _substitute(f.embed(self.ring) if f.ring != self.ring else f, self.coordinate_matrix(), self.ring)

    def transform(self, L: DiffOp) -> DiffOp:
        """``L`` written in the primed coordinates."""
        return transform_diffop(L, self.coordinate_matrix())

    def shifted_form(self, j: int) -> DiffOp:
        """``dy_j + l_j`` (0-based ``j``) on the extended ring."""
        ring = self.ring
        return DiffOp.partial(ring, self.n + j) + self.forms[j].to_diffop(self.base_ring).embed(ring)

    def diagonal_target(self, psd: PowerSumDecomposition) -> DiffOp:
        """``sum_t c_t dy_t^(d_t)``, the shape the extended operator must take after the change."""
        ring = self.ring
        total = DiffOp.zero(ring)
        for j, (c, _, d) in enumerate(psd.summands):
            total = total + (DiffOp.partial(ring, self.n + j) ** d).scale(c)
        return total

    def product_target(self) -> DiffOp:
        ring = self.ring
        total = DiffOp.one(ring)
        for j in range(self.N):
            total = total * DiffOp.partial(ring, self.n + j)
        return total


def build_extended_operator(psd: PowerSumDecomposition) -> tuple[DiffOp, ExtendedRing]:
    """``sum_t c_t (dy_t + l_t)^(d_t)`` and its coordinate change."""
    if not psd.summands:
        raise ValueError("empty power-sum decomposition")
    ext = ExtendedRing.for_forms([form for _, form, _ in psd.summands])
    total = DiffOp.zero(ext.ring)
    for j, (c, _, d) in enumerate(psd.summands):
        total = total + (ext.shifted_form(j) ** d).scale(c)
    return total, ext


def build_extended_product(forms: Sequence[LinearForm]) -> tuple[DiffOp, ExtendedRing]:
    """``prod_t (dy_t + l_t)`` and its coordinate change."""
    forms = list(forms)
    if any(f.is_zero() for f in forms):
        raise ValueError("product of linear forms needs nonzero forms")
    ext = ExtendedRing.for_forms(forms)
    total = DiffOp.one(ext.ring)
    for j in range(ext.N):
        total = total * ext.shifted_form(j)
    return total, ext


def transform_diffop(L: DiffOp, matrix: Sequence[Sequence]) -> DiffOp:
    """The operator ``L'`` with ``L'(f o M) = (L f) o M`` for the substitution ``M``.

    Partials transform contragrediently: ``d_j`` becomes row ``j`` of ``M^-1``
    read as a form in the new partials.
    """
    m = as_matrix(matrix, L.field)
    if len(m) != L.dim:
        raise ValueError(f"matrix has size {len(m)}, operator ring has dimension {L.dim}")
    return _substitute(L, transpose(inverse(m, L.field)), L.ring)


def extension_preserves_x_action(L: DiffOp, Lstar: DiffOp, f: Polynomial) -> bool:
    """Whether ``L*`` and ``L`` agree on the y-free polynomial ``f``."""
    big = Lstar.ring
    if f.ring == big:
        f = f.restrict(L.ring)
    elif f.ring != L.ring:
        raise ValueError("f must live in the base ring or the extended ring")
    if L.ring.field != big.field or L.ring.n != big.n:
        raise ValueError("operators do not share their x-variables")
    return apply(Lstar, f.embed(big)) == apply(L, f).embed(big)
