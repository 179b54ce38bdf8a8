"""Exact arithmetic on H-contracted Chern vectors.

A numerical class is recorded by the four rationals

    e0 = H^3.ch0,  e1 = H^2.ch1,  e2 = H.ch2,  e3 = ch3

and the parameter half-plane is coordinatised by (s, beta) with s = alpha^2,
so every quantity here stays inside the rationals.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer. Decimals are rejected on purpose."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ChernVector:
    e0: Fraction
    e1: Fraction
    e2: Fraction
    e3: Fraction

    def __post_init__(self) -> None:
        for name in ("e0", "e1", "e2", "e3"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def of(cls, *components: RationalLike) -> "ChernVector":
        if len(components) != 4:
            raise ValueError("a Chern vector has exactly four components")
        return cls(*components)

    @classmethod
    def parse(cls, text: str) -> "ChernVector":
        """Parse ``"e0,e1,e2,e3"``."""
        parts = text.split(",")
        if len(parts) != 4:
            raise ValueError(f"expected four comma-separated rationals, got {text!r}")
        return cls(*(parse_rational(p) for p in parts))

    def __iter__(self) -> Iterator[Fraction]:
        return iter((self.e0, self.e1, self.e2, self.e3))

    def __add__(self, other: "ChernVector") -> "ChernVector":
        return ChernVector(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "ChernVector") -> "ChernVector":
        return ChernVector(*(a - b for a, b in zip(self, other)))

    def __neg__(self) -> "ChernVector":
        return ChernVector(*(-a for a in self))

    def scale(self, t: RationalLike) -> "ChernVector":
        t = as_rational(t)
        return ChernVector(*(t * a for a in self))

    def is_proportional(self, other: "ChernVector") -> bool:
        a, b = tuple(self), tuple(other)
        return all(a[i] * b[j] == a[j] * b[i] for i in range(4) for j in range(i + 1, 4))

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self]

    @classmethod
    def from_json(cls, data: list[str]) -> "ChernVector":
        return cls.parse(",".join(data))


@dataclass(frozen=True)
class TiltPoint:
    """A point of the tilt half-plane; ``s`` is alpha squared."""

    s: Fraction
    beta: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", as_rational(self.s))
        object.__setattr__(self, "beta", as_rational(self.beta))
        if self.s < 0:
            raise ValueError("s = alpha^2 must be non-negative")

    def to_json(self) -> dict[str, str]:
        return {"s": format_rational(self.s), "beta": format_rational(self.beta)}


@dataclass(frozen=True)
class Slope:
    """Tilt slope kept as an undivided pair; ``den == 0`` is slope +infinity."""

    num: Fraction
    den: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "num", as_rational(self.num))
        object.__setattr__(self, "den", as_rational(self.den))

    @property
    def is_infinite(self) -> bool:
        return self.den == 0


class Order(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def twist(v: ChernVector, beta: RationalLike) -> ChernVector:
    """Multiply by exp(-beta H) and contract with H."""
    b = as_rational(beta)
    b2 = b * b / 2
    b3 = b * b * b / 6
    return ChernVector(
        v.e0,
        v.e1 - b * v.e0,
        v.e2 - b * v.e1 + b2 * v.e0,
        v.e3 - b * v.e2 + b2 * v.e1 - b3 * v.e0,
    )


def discriminant(v: ChernVector) -> Fraction:
    return v.e1 * v.e1 - 2 * v.e0 * v.e2


def q_form(v: ChernVector, p: TiltPoint) -> Fraction:
    w = twist(v, p.beta)
    return p.s * discriminant(v) + 4 * w.e2 * w.e2 - 6 * w.e1 * w.e3


def tilt_slope(v: ChernVector, p: TiltPoint) -> Slope:
    w = twist(v, p.beta)
    return Slope(w.e2 - p.s / 2 * v.e0, w.e1)


def slope_cmp(a: Slope, b: Slope) -> Order:
    if a.den < 0 or b.den < 0:
        return Order.INCOMPARABLE
    if a.is_infinite and b.is_infinite:
        return Order.EQUAL
    if b.is_infinite:
        return Order.LESS
    if a.is_infinite:
        return Order.GREATER
    lhs = a.num * b.den
    rhs = b.num * a.den
    if lhs < rhs:
        return Order.LESS
    if lhs > rhs:
        return Order.GREATER
    return Order.EQUAL
