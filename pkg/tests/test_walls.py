import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from tiltwall.chern_core import ChernVector, Order, TiltPoint, q_form, slope_cmp, tilt_slope, twist
from tiltwall.walls import (
    Empty,
    Nesting,
    Semicircle,
    VerticalLine,
    WallLocus,
    point_on_wall,
    q_wall,
    scaled,
    shape,
    wall_between,
    wall_through,
    walls_nested,
)

from conftest import O_L, chern_vectors, random_lattice_class, rationals


def _less_than_sum_of_roots(lhs, a, b):
    """lhs < 2*sqrt(a)*sqrt(b) for a, b >= 0, decided exactly."""
    if lhs < 0:
        return True
    return lhs * lhs < 4 * a * b


def crossing_oracle(w1, w2):
    """Center/radius comparison of two realizable, distinct walls."""
    s1, s2 = shape(w1), shape(w2)
    if isinstance(s1, VerticalLine) and isinstance(s2, VerticalLine):
        return False
    if isinstance(s1, VerticalLine):
        s1, s2 = s2, s1
    if isinstance(s2, VerticalLine):
        return (s2.beta - s1.center) ** 2 < s1.radius_sq
    d2 = (s1.center - s2.center) ** 2
    r1, r2 = s1.radius_sq, s2.radius_sq
    # |r1 - r2| < d < r1 + r2, all squared
    return _less_than_sum_of_roots(d2 - r1 - r2, r1, r2) and _less_than_sum_of_roots(r1 + r2 - d2, r1, r2)


def test_wall_between_same_classical_slope_is_vertical():
    for e2 in (Fraction(-3), Fraction(0), Fraction(1, 2), Fraction(7, 3)):
        w = wall_between(O_L, ChernVector(7, 4, e2, 5))
        if w is None:
            assert e2 == 1
            continue
        assert w.x == 0
        assert isinstance(shape(w), VerticalLine)
        assert shape(w).beta == Fraction(4, 7)


def test_wall_between_proportional_is_none():
    assert wall_between(O_L, O_L) is None
    assert wall_between(O_L, O_L.scale(3)) is None


def test_wall_coefficients_symbolic():
    # cross-multiplied slope equality expands to x(s+b^2) + y b + z
    s, b = sympy.symbols("s b")
    v = sympy.symbols("v0:4")
    w = sympy.symbols("w0:4")

    def tw(c):
        return c[1] - b * c[0], c[2] - b * c[1] + b**2 / 2 * c[0]

    v1, v2 = tw(v)
    w1, w2 = tw(w)
    eq = sympy.expand((v2 - s / 2 * v[0]) * w1 - (w2 - s / 2 * w[0]) * v1)
    x = (w[0] * v[1] - v[0] * w[1]) / 2
    y = v[0] * w[2] - w[0] * v[2]
    z = w[1] * v[2] - v[1] * w[2]
    assert sympy.expand(eq - (x * (s + b**2) + y * b + z)) == 0


def test_slopes_agree_on_computed_wall():
    rng = random.Random(17)
    checked = 0
    while checked < 300:
        v, w = random_lattice_class(rng), random_lattice_class(rng)
        wall = wall_between(v, w)
        if wall is None or not wall.realizable:
            continue
        for p in point_on_wall(wall, 3):
            sv, sw = tilt_slope(v, p), tilt_slope(w, p)
            # cross-multiplied equality, valid whatever the signs of the denominators
            assert sv.num * sw.den == sw.num * sv.den
            if sv.den > 0 and sw.den > 0:
                assert slope_cmp(sv, sw) is Order.EQUAL
        checked += 1


def test_common_wall_slope_example():
    p = TiltPoint(Fraction(1, 16), Fraction(1, 4))
    wall = wall_through(O_L, p)
    assert wall.contains(p)
    sl = tilt_slope(O_L, p)
    # a rank-one class with the same slope at p, added in random multiples
    u = twist(ChernVector(1, 1, sl.num / sl.den + p.s / 2, 0), -p.beta)
    rng = random.Random(2)
    for _ in range(20):
        cand = O_L + u.scale(Fraction(rng.randint(1, 9), rng.randint(1, 4)))
        assert slope_cmp(tilt_slope(cand, p), sl) is Order.EQUAL
        assert wall_between(O_L, cand).same_locus(wall)


@given(chern_vectors(), chern_vectors())
def test_wall_between_antisymmetric(v, w):
    a, b = wall_between(v, w), wall_between(w, v)
    assert (a is None) == (b is None)
    if a is not None:
        assert tuple(b) == tuple(-c for c in a)
        assert a.same_locus(b)


@given(chern_vectors(), chern_vectors(), rationals())
def test_adding_multiple_of_v_keeps_wall(v, w, t):
    a = wall_between(v, w)
    b = wall_between(v, w + v.scale(t))
    assert (a is None) == (b is None)
    if a is not None:
        assert a.same_locus(b)


def test_q_wall_examples():
    w = q_wall(O_L)
    assert tuple(w) == (2, -1, 0)
    assert shape(w) == Semicircle(Fraction(1, 4), Fraction(1, 16))
    assert isinstance(shape(q_wall(ChernVector(7, 0, 0, 0))), Empty)
    assert q_wall(ChernVector(7, 0, 0, 0)).is_zero


@given(chern_vectors(), rationals(), st.builds(Fraction, st.integers(0, 40), st.integers(1, 7)))
def test_q_wall_coefficient_identity(v, beta, s):
    p = TiltPoint(s, beta)
    assert q_form(v, p) == q_wall(v).evaluate(p)


def test_q_form_vanishes_on_q_wall():
    rng = random.Random(23)
    seen = 0
    while seen < 100:
        v = random_lattice_class(rng)
        w = q_wall(v)
        if not w.realizable:
            continue
        for p in point_on_wall(w, 20):
            assert p.s > 0
            assert q_form(v, p) == 0
        seen += 1


def test_shape_examples():
    assert shape(WallLocus(2, -1, 0)) == Semicircle(Fraction(1, 4), Fraction(1, 16))
    assert shape(WallLocus(0, 1, Fraction(-1, 2))) == VerticalLine(Fraction(1, 2))
    assert shape(WallLocus(1, 0, 1)) == Empty()
    assert shape(WallLocus(1, -2, 1)) == Empty()  # radius zero
    assert shape(WallLocus(0, 0, 3)) == Empty()


@given(rationals(), rationals(), rationals())
def test_shape_exhaustive(x, y, z):
    w = WallLocus(x, y, z)
    sh = shape(w)
    if isinstance(sh, Semicircle):
        assert x != 0 and sh.radius_sq > 0
    elif isinstance(sh, VerticalLine):
        assert x == 0 and y != 0
    else:
        assert isinstance(sh, Empty)
        assert (x != 0 and y * y - 4 * x * z <= 0) or (x == 0 and y == 0)


def test_normalization():
    w = WallLocus(Fraction(-4, 3), Fraction(2, 3), 0)
    assert w.normalized() == (2, -1, 0)
    assert scaled(w, -7).normalized() == (2, -1, 0)
    assert WallLocus(0, -3, 6).normalized() == (0, 1, -2)


def test_walls_nested_examples():
    w = q_wall(O_L)
    assert walls_nested(w, scaled(w, 3)) is Nesting.IDENTICAL
    inner = WallLocus(1, Fraction(-1, 2), Fraction(1, 32))
    assert walls_nested(w, inner) is Nesting.DISJOINT
    assert walls_nested(w, WallLocus(0, 1, Fraction(-1, 4))) is Nesting.CROSSING
    assert walls_nested(w, WallLocus(0, 1, Fraction(-1, 2))) is Nesting.DISJOINT  # tangent at s = 0
    assert walls_nested(w, WallLocus(1, -1, 0)) is Nesting.DISJOINT  # tangent at the origin
    assert walls_nested(w, WallLocus(1, -1, Fraction(3, 16))) is Nesting.CROSSING
    with pytest.raises(ValueError):
        walls_nested(w, WallLocus(1, 0, 1))


def test_walls_nested_matches_radius_oracle():
    rng = random.Random(31)
    counts = {n: 0 for n in Nesting}
    for _ in range(3000):
        ws = []
        for _ in range(2):
            if rng.random() < 0.15:
                ws.append(WallLocus(0, rng.choice([-3, -1, 1, 2]), Fraction(rng.randint(-12, 12), rng.randint(1, 4))))
            else:
                c = Fraction(rng.randint(-12, 12), rng.randint(1, 4))
                r2 = Fraction(rng.randint(1, 40), rng.randint(1, 4))
                ws.append(WallLocus(1, -2 * c, c * c - r2))
        got = walls_nested(*ws)
        counts[got] += 1
        if ws[0].same_locus(ws[1]):
            assert got is Nesting.IDENTICAL
        else:
            assert (got is Nesting.CROSSING) == crossing_oracle(*ws)
    assert counts[Nesting.CROSSING] and counts[Nesting.DISJOINT]


def test_walls_for_different_classes_can_cross():
    rng = random.Random(41)
    found = None
    for _ in range(5000):
        v1, w1, v2, w2 = (random_lattice_class(rng, 3) for _ in range(4))
        a, b = wall_between(v1, w1), wall_between(v2, w2)
        if a is None or b is None or not (a.realizable and b.realizable):
            continue
        if walls_nested(a, b) is Nesting.CROSSING:
            found = (a, b)
            break
    assert found is not None
    assert crossing_oracle(*found)


def test_nested_for_fixed_class_sample():
    rng = random.Random(43)
    for _ in range(2000):
        a = wall_between(O_L, random_lattice_class(rng))
        b = wall_between(O_L, random_lattice_class(rng))
        if a is None or b is None or not (a.realizable and b.realizable):
            continue
        assert walls_nested(a, b) is not Nesting.CROSSING


def test_point_on_wall():
    pts = point_on_wall(q_wall(O_L), 1)
    assert pts == [TiltPoint(Fraction(1, 16), Fraction(1, 4))]
    w = WallLocus(3, 1, -5)  # irrational radius
    pts = point_on_wall(w, 25)
    assert len({p.beta for p in pts}) == 25
    assert all(p.s > 0 and w.contains(p) for p in pts)
    v = WallLocus(0, 2, -1)
    pts = point_on_wall(v, 4)
    assert len({p.s for p in pts}) == 4
    assert all(p.beta == Fraction(1, 2) and v.contains(p) for p in pts)
    with pytest.raises(ValueError):
        point_on_wall(WallLocus(1, 0, 1), 1)


@given(rationals(), rationals(), rationals(), st.integers(1, 12))
def test_point_on_wall_property(x, y, z, n):
    w = WallLocus(x, y, z)
    assume(w.realizable)
    pts = point_on_wall(w, n)
    assert len(pts) == n
    assert all(p.s > 0 and w.evaluate(p) == 0 for p in pts)


def test_wall_json():
    assert q_wall(O_L).to_json() == {
        "x": "2",
        "y": "-1",
        "z": "0",
        "shape": "semicircle",
        "center": "1/4",
        "radius_sq": "1/16",
    }
    assert WallLocus(0, 1, Fraction(-1, 2)).to_json()["shape"] == "vertical"
    assert q_wall(ChernVector(7, 0, 0, 0)).to_json()["shape"] == "empty"
