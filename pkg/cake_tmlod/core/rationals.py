# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Exact rational helpers and the dyadic rational type.

General rationals are `fractions.Fraction`. Values of the form n/2^k (Gowers
sums, graph weights) use `DyadicRational`, which keeps the exponent explicit
so that serialisation is "num/2^k".
"""

import re
from fractions import Fraction
from functools import total_ordering
from typing import Union

from cake_tmlod.utils.errors import InvalidArgumentError

Rational = Fraction

_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*/\s*2\^(\d+)\s*$")


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse "p/q", an integer or a decimal literal into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    match = _DYADIC_RE.match(str(text))
    if match:
        return Fraction(int(match.group(1)), 1 << int(match.group(2)))
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidArgumentError(f"not a rational number: {text!r}") from e


def format_rational(x: Fraction) -> str:
    """Serialise as "num/den" (the denominator is always written)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@total_ordering
class DyadicRational:
    """Exact value numerator / 2^exponent, stored with an odd numerator (or 0/2^0)."""

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int, exponent: int = 0):
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            exponent = 0
        else:
            shift = min((numerator & -numerator).bit_length() - 1, exponent)
            numerator >>= shift
            exponent -= shift
        self.numerator = numerator
        self.exponent = exponent

    @classmethod
    def from_fraction(cls, value: Fraction) -> "DyadicRational":
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise InvalidArgumentError(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> "DyadicRational":
        return cls.from_fraction(parse_rational(text))

    def _align(self, other: "DyadicRational"):
        k = max(self.exponent, other.exponent)
        return (
            self.numerator << (k - self.exponent),
            other.numerator << (k - other.exponent),
            k,
        )

    @staticmethod
    def _coerce(other) -> "DyadicRational":
        if isinstance(other, DyadicRational):
            return other
        if isinstance(other, int):
            return DyadicRational(other)
        if isinstance(other, Fraction):
            return DyadicRational.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, k = self._align(other)
        return DyadicRational(a + b, k)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, k = self._align(other)
        return DyadicRational(a - b, k)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return DyadicRational(
            self.numerator * other.numerator, self.exponent + other.exponent
        )

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "DyadicRational":
        if power < 0:
            raise InvalidArgumentError("negative powers are not dyadic")
        return DyadicRational(self.numerator**power, self.exponent * power)

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.numerator, self.exponent)

    def __abs__(self) -> "DyadicRational":
        return DyadicRational(abs(self.numerator), self.exponent)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        if not isinstance(other, DyadicRational):
            return NotImplemented
        return self.numerator == other.numerator and self.exponent == other.exponent

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, _ = self._align(other)
        return a < b

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __bool__(self) -> bool:
        return self.numerator != 0

    def __float__(self) -> float:
        return float(self.to_fraction())

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"

    def __repr__(self) -> str:
        return f"DyadicRational({self.numerator}, {self.exponent})"
