"""Numbers of the form a + b*sqrt(d) with a, b, d rational, d >= 0.

Only what wall endpoints need: sign, comparison, affine maps and a
floating view for rendering.  No root is ever extracted exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .chern_core import RationalLike, as_rational, format_rational


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def rational_sqrt(d: Fraction) -> Fraction | None:
    """Exact square root of ``d`` when it is a rational square."""
    if d < 0:
        return None
    n, m = d.numerator, d.denominator
    rn, rm = math.isqrt(n), math.isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return None


def sqrt_bracket(d: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rationals lo <= sqrt(d) <= hi with hi - lo <= 2**-bits."""
    if d < 0:
        raise ValueError("negative radicand")
    scale = 1 << bits
    # sqrt(n/m) = sqrt(n*m)/m
    n, m = d.numerator, d.denominator
    root = math.isqrt(n * m * scale * scale)
    lo = Fraction(root, m * scale)
    hi = lo if root * root == n * m * scale * scale else Fraction(root + 1, m * scale)
    return lo, hi


@dataclass(frozen=True)
class Surd:
    a: Fraction
    b: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        a, b, d = (as_rational(x) for x in (self.a, self.b, self.d))
        if d < 0:
            raise ValueError("radicand must be non-negative")
        root = rational_sqrt(d)
        if root is not None:
            a, b, d = a + b * root, Fraction(0), Fraction(0)
        elif b == 0:
            d = Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.a

    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        return sa * _sign(self.a * self.a - self.b * self.b * self.d)

    def affine(self, scale: RationalLike, shift: RationalLike = 0) -> "Surd":
        """Return scale*self + shift."""
        k, t = as_rational(scale), as_rational(shift)
        return Surd(k * self.a + t, k * self.b, self.d)

    def __sub__(self, other: "Surd | RationalLike") -> "Surd":
        if isinstance(other, Surd):
            if other.b and self.b and other.d != self.d:
                raise ValueError("surds with different radicands")
            d = self.d if self.b else other.d
            return Surd(self.a - other.a, self.b - other.b, d)
        return self.affine(1, -as_rational(other))

    def compare(self, other: "Surd | RationalLike") -> int:
        return (self - other).sign()

    def bracket(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """Rational lower and upper bounds."""
        if self.is_rational:
            return self.a, self.a
        lo, hi = sqrt_bracket(self.d, bits)
        ends = sorted((self.a + self.b * lo, self.a + self.b * hi))
        return ends[0], ends[1]

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(float(self.d))

    def to_json(self) -> str:
        if self.is_rational:
            return format_rational(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{format_rational(self.a)}{sign}{format_rational(abs(self.b))}*sqrt({format_rational(self.d)})"

    def __str__(self) -> str:
        return self.to_json()
