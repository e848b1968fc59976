"""Exact coefficient fields: the rationals, the Gaussian rationals and prime fields.

Elements are plain Python objects supporting ``+ - * /`` and ``**``:

* rationals use :class:`fractions.Fraction`,
* Gaussian rationals use :class:`GaussianRational`,
* prime fields use :class:`Residue`.

:class:`FieldSpec` coerces literals into its element type and is the only
thing that needs to know which of the three is in play.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "FieldSpec",
    "GaussianRational",
    "Residue",
    "Scalar",
    "QQ",
    "QQI",
    "GF",
    "is_prime",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for q in range(3, math.isqrt(p) + 1, 2):
        if p % q == 0:
            return False
    return True


class Residue:
    """An element of Z/pZ, stored as its representative in ``0..p-1``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _other(self, other) -> int:
        if isinstance(other, Residue):
            if other.p != self.p:
                raise TypeError(f"cannot mix residues mod {self.p} and mod {other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> Residue:
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return Residue(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * Residue(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue(o, self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Residue(pow(self.value, k, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"Residue({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


_Rational = Union[int, Fraction]


class GaussianRational:
    """``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: _Rational = 0, im: _Rational = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> GaussianRational:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re} {sign} {abs(self.im)}*i"


Scalar = Union[Fraction, GaussianRational, Residue]


@dataclass(frozen=True)
class FieldSpec:
    """Which exact field the coefficients live in.

    ``kind`` is ``"Q"``, ``"QI"`` or ``"FP"``; ``p`` is set only for ``"FP"``.
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "QI", "FP"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "FP":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"prime field needs a prime modulus, got {self.p}")
        elif self.p is not None:
            raise ValueError("only prime fields carry a modulus")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("Q")

    @classmethod
    def gaussian(cls) -> FieldSpec:
        return cls("QI")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("FP", p)

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """Read the command-line spelling: ``q``, ``qi`` or ``fp:<p>``."""
        t = text.strip().lower()
        if t == "q":
            return cls.rationals()
        if t == "qi":
            return cls.gaussian()
        if t.startswith("fp:"):
            try:
                p = int(t[3:])
            except ValueError:
                raise ValueError(f"bad prime in field spec {text!r}") from None
            return cls.prime(p)
        raise ValueError(f"unknown field {text!r} (expected q, qi or fp:<p>)")

    def __str__(self):
        return {"Q": "q", "QI": "qi"}.get(self.kind) or f"fp:{self.p}"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "FP" else 0

    @property
    def zero(self) -> Scalar:
        return self.coerce(0)

    @property
    def one(self) -> Scalar:
        return self.coerce(1)

    @property
    def imaginary_unit(self) -> GaussianRational:
        if self.kind != "QI":
            raise ValueError(f"i is not an element of {self}")
        return GaussianRational(0, 1)

    def coerce(self, value) -> Scalar:
        """Map an int, Fraction or element of this field into canonical form."""
        if self.kind == "Q":
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            if isinstance(value, GaussianRational) and not value.im:
                return value.re
        elif self.kind == "QI":
            if isinstance(value, GaussianRational):
                return value
            if isinstance(value, (int, Fraction)):
                return GaussianRational(value)
        else:
            if isinstance(value, Residue):
                if value.p != self.p:
                    raise TypeError(f"residue mod {value.p} is not in {self}")
                return value
            if isinstance(value, int):
                return Residue(value, self.p)
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{value} has no image in {self}")
                return Residue(value.numerator, self.p) / value.denominator
        raise TypeError(f"cannot interpret {value!r} as an element of {self}")

    def contains(self, value) -> bool:
        if self.kind == "Q":
            return isinstance(value, Fraction)
        if self.kind == "QI":
            return isinstance(value, GaussianRational)
        return isinstance(value, Residue) and value.p == self.p

    def random_element(self, rng: random.Random, bound: int = 3) -> Scalar:
        """Small random element: integer parts in ``-bound..bound`` or a uniform residue."""
        if self.kind == "Q":
            return Fraction(rng.randint(-bound, bound))
        if self.kind == "QI":
            return GaussianRational(rng.randint(-bound, bound), rng.randint(-bound, bound))
        return Residue(rng.randrange(self.p), self.p)

    def random_nonzero(self, rng: random.Random, bound: int = 3) -> Scalar:
        while True:
            c = self.random_element(rng, bound)
            if c:
                return c


QQ = FieldSpec.rationals()
QQI = FieldSpec.gaussian()


def GF(p: int) -> FieldSpec:
    return FieldSpec.prime(p)
