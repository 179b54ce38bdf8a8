"""Numerical walls x*(s + beta^2) + y*beta + z = 0 in the tilt half-plane.

Walls are kept as raw coefficient triples; geometry (center, radius^2,
vertical position) is a derived view.  Comparisons go through the
normalized triple, so two walls are the same locus iff their normalized
triples are equal.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .chern_core import (
    ChernVector,
    RationalLike,
    TiltPoint,
    as_rational,
    discriminant,
    format_rational,
    tilt_slope,
    twist,
)
from .surd import Surd, sqrt_bracket


@dataclass(frozen=True)
class WallLocus:
    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    @property
    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    def evaluate(self, p: TiltPoint) -> Fraction:
        return self.x * (p.s + p.beta * p.beta) + self.y * p.beta + self.z

    def contains(self, p: TiltPoint) -> bool:
        return self.evaluate(p) == 0

    def normalized(self) -> tuple[int, int, int]:
        """Primitive integer triple with first nonzero entry positive."""
        coeffs = tuple(self)
        lcm = 1
        for c in coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in coeffs]
        g = math.gcd(*ints)
        if g == 0:
            return (0, 0, 0)
        ints = [i // g for i in ints]
        lead = next(i for i in ints if i)
        if lead < 0:
            ints = [-i for i in ints]
        return tuple(ints)  # type: ignore[return-value]

    def same_locus(self, other: "WallLocus") -> bool:
        return self.normalized() == other.normalized()

    @property
    def realizable(self) -> bool:
        return not isinstance(shape(self), Empty)

    def to_json(self) -> dict[str, str | None]:
        sh = shape(self)
        out: dict[str, str | None] = {
            "x": format_rational(self.x),
            "y": format_rational(self.y),
            "z": format_rational(self.z),
            "shape": sh.kind,
            "center": None,
            "radius_sq": None,
        }
        if isinstance(sh, Semicircle):
            out["center"] = format_rational(sh.center)
            out["radius_sq"] = format_rational(sh.radius_sq)
        elif isinstance(sh, VerticalLine):
            out["beta"] = format_rational(sh.beta)
        return out


@dataclass(frozen=True)
class Semicircle:
    center: Fraction
    radius_sq: Fraction
    kind = "semicircle"

    @property
    def left(self) -> Surd:
        return Surd(self.center, -1, self.radius_sq)

    @property
    def right(self) -> Surd:
        return Surd(self.center, 1, self.radius_sq)


@dataclass(frozen=True)
class VerticalLine:
    beta: Fraction
    kind = "vertical"


@dataclass(frozen=True)
class Empty:
    kind = "empty"


WallShape = Union[Semicircle, VerticalLine, Empty]


class Nesting(enum.Enum):
    IDENTICAL = "identical"
    DISJOINT = "disjoint"
    CROSSING = "crossing"


def wall_between(v: ChernVector, w: ChernVector) -> WallLocus | None:
    """Locus where the tilt slopes of ``v`` and ``w`` agree; None if proportional."""
    x = (w.e0 * v.e1 - v.e0 * w.e1) / 2
    y = v.e0 * w.e2 - w.e0 * v.e2
    z = w.e1 * v.e2 - v.e1 * w.e2
    if x == 0 and y == 0 and z == 0:
        return None
    return WallLocus(x, y, z)


def q_wall(v: ChernVector) -> WallLocus:
    """Coefficients of the Q form of ``v`` as a function of (s, beta).

    May be the zero triple (e.g. for multiples of the structure sheaf);
    ``shape`` reports that case as Empty.
    """
    return WallLocus(
        discriminant(v),
        6 * v.e0 * v.e3 - 2 * v.e1 * v.e2,
        4 * v.e2 * v.e2 - 6 * v.e1 * v.e3,
    )


def shape(w: WallLocus) -> WallShape:
    if w.x != 0:
        center = -w.y / (2 * w.x)
        radius_sq = (w.y * w.y - 4 * w.x * w.z) / (4 * w.x * w.x)
        if radius_sq > 0:
            return Semicircle(center, radius_sq)
        return Empty()
    if w.y != 0:
        return VerticalLine(-w.z / w.y)
    return Empty()


def _monic(w: WallLocus) -> tuple[Fraction, Fraction, Fraction]:
    """Scale so that the s-coefficient is 1 (circles) or the beta-coefficient is 1 (lines)."""
    if w.x != 0:
        return Fraction(1), w.y / w.x, w.z / w.x
    return Fraction(0), Fraction(1), w.z / w.y


def walls_nested(w1: WallLocus, w2: WallLocus) -> Nesting:
    """Intersection behaviour of two realizable walls in the open region s > 0."""
    if not (w1.realizable and w2.realizable):
        raise ValueError("walls_nested needs two realizable walls")
    if w1.same_locus(w2):
        return Nesting.IDENTICAL
    a1, b1, c1 = _monic(w1)
    a2, b2, c2 = _monic(w2)
    if a1 == 0 and a2 == 0:
        # two distinct vertical lines
        return Nesting.DISJOINT
    if a1 == 0:
        (a1, b1, c1), (a2, b2, c2) = (a2, b2, c2), (a1, b1, c1)
    # now w1 is a circle s + beta^2 + b1*beta + c1 = 0.  The difference with w2
    # (circle or line) is linear in beta and fixes the only candidate beta.
    if a2 == 0:
        beta = -c2
    else:
        db, dc = b1 - b2, c1 - c2
        if db == 0:
            # concentric and not identical
            return Nesting.DISJOINT
        beta = -dc / db
    s = -(beta * beta + b1 * beta + c1)
    return Nesting.CROSSING if s > 0 else Nesting.DISJOINT


def _rational_below_sqrt(d: Fraction) -> Fraction:
    """A positive rational not exceeding sqrt(d), for d > 0."""
    bits = 8
    while True:
        lo, _ = sqrt_bracket(d, bits)
        if lo > 0:
            return lo
        bits *= 2


def point_on_wall(w: WallLocus, count: int) -> list[TiltPoint]:
    """``count`` distinct rational points with s > 0 lying exactly on ``w``."""
    if count < 0:
        raise ValueError("count must be non-negative")
    sh = shape(w)
    if isinstance(sh, Empty):
        raise ValueError("wall has no points in the half-plane s > 0")
    if isinstance(sh, VerticalLine):
        return [TiltPoint(Fraction(k), sh.beta) for k in range(1, count + 1)]
    rho = _rational_below_sqrt(sh.radius_sq)
    points = []
    for i in range(1, count + 1):
        t = Fraction(2 * i, count + 1) - 1
        beta = sh.center + rho * t
        offset = beta - sh.center
        points.append(TiltPoint(sh.radius_sq - offset * offset, beta))
    return points


def wall_through(v: ChernVector, p: TiltPoint) -> WallLocus | None:
    """The numerical wall for ``v`` passing through ``p``, if ``v`` has one there."""
    if p.s <= 0:
        raise ValueError("point must satisfy s > 0")
    sl = tilt_slope(v, p)
    if sl.den == 0:
        return WallLocus(0, 1, -p.beta) if v.e0 != 0 else None
    # a unit-rank class whose tilt slope at p equals that of v
    w = twist(ChernVector(1, 1, sl.num / sl.den + p.s / 2, 0), -p.beta)
    return wall_between(v, w)


def scaled(w: WallLocus, t: RationalLike) -> WallLocus:
    t = as_rational(t)
    return WallLocus(t * w.x, t * w.y, t * w.z)
