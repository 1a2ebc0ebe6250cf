"""Exact Gaussian-rational arithmetic.

Every structural computation in this package runs over Q(i), represented as
pairs of ``fractions.Fraction``.  Real algebras simply keep the imaginary
part at zero; nothing is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Fraction

_Real = Union[int, Fraction]
_Coercible = Union[int, Fraction, "GaussianRational"]


_ZERO_FRACTION = Fraction(0)


class GaussianRational:
    """A Gaussian rational a + b*i with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: _Real = 0, im: _Real = 0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("GaussianRational is immutable")

    # -- coercion ---------------------------------------------------------
    @staticmethod
    def of(value: _Coercible) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(value)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_integer(self) -> bool:
        return not self.im and self.re.denominator == 1

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: _Coercible) -> "GaussianRational":
        o = other if isinstance(other, GaussianRational) else GaussianRational(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: _Coercible) -> "GaussianRational":
        o = other if isinstance(other, GaussianRational) else GaussianRational(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: _Coercible) -> "GaussianRational":
        return GaussianRational.of(other) - self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: _Coercible) -> "GaussianRational":
        o = other if isinstance(other, GaussianRational) else GaussianRational(other)
        # real-only values dominate in practice; avoid the complex formula
        if not self.im and not o.im:
            return GaussianRational(self.re * o.re, _ZERO_FRACTION)
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: _Coercible) -> "GaussianRational":
        o = other if isinstance(other, GaussianRational) else GaussianRational(other)
        if not o.im:
            if not o.re:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return GaussianRational(self.re / o.re, self.im / o.re)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other: _Coercible) -> "GaussianRational":
        return GaussianRational.of(other) / self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- conversion ---------------------------------------------------------
    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def real_fraction(self) -> Fraction:
        if self.im:
            raise ValueError(f"{self} has a nonzero imaginary part")
        return self.re

    def __repr__(self) -> str:
        return f"GQ({self})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        imag = "i" if self.im == 1 else ("-i" if self.im == -1 else f"{self.im}i")
        if not self.re:
            return imag
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        imag = "i" if mag == 1 else f"{mag}i"
        return f"{self.re}{sign}{imag}"


GQ = GaussianRational

ZERO = GQ(0)
ONE = GQ(1)
I = GQ(0, 1)


def gq(re: _Real = 0, im: _Real = 0) -> GQ:
    """Shorthand constructor."""
    return GQ(re, im)
