"""Lattice-constrained search for destabilizing subobjects.

The pipeline looks for a lattice class F with F and v - F both in the
(numerical shadow of the) tilted heart along the whole Q = 0 circle of v,
whose wall with v is that circle.  If none exists and no wall crosses the
vertical ray through the right end of the circle, the class is tilt-stable
just inside the circle, where Q < 0.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .chern_core import (
    ChernVector,
    RationalLike,
    TiltPoint,
    as_rational,
    discriminant,
    format_rational,
    q_form,
    twist,
)
from .surd import Surd
from .variety import DivisorClass, Lattice, VarietyPreset
from .walls import Nesting, Semicircle, WallLocus, q_wall, shape, wall_between, walls_nested

REPORT_VERSION = 1
DEFAULT_REGION_MARGIN = Fraction(1, 4)
DEFAULT_E0_FACTOR = 8


class _AnyE2:
    """Every e2 works (up to one excluded value); returned by solve_e2_for_wall."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ANY_E2"

    def __reduce__(self):
        return (_AnyE2, ())


ANY_E2 = _AnyE2()
E2Solutions = Union[list[Fraction], _AnyE2]


class Conclusion(enum.Enum):
    COUNTEREXAMPLE_CONFIRMED = "CounterexampleConfirmed"
    WALL_CANDIDATE_FOUND = "WallCandidateFound"
    INCONCLUSIVE = "Inconclusive"


def _as_surd(x: Surd | RationalLike) -> Surd:
    return x if isinstance(x, Surd) else Surd(as_rational(x))


@dataclass(frozen=True)
class HeartInterval:
    beta_lo: Surd
    beta_hi: Surd

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta_lo", _as_surd(self.beta_lo))
        object.__setattr__(self, "beta_hi", _as_surd(self.beta_hi))
        if self.beta_lo.compare(self.beta_hi) > 0:
            raise ValueError(f"empty interval [{self.beta_lo}, {self.beta_hi}]")

    @property
    def endpoints(self) -> tuple[Surd, Surd]:
        return (self.beta_lo, self.beta_hi)

    def to_json(self) -> dict[str, str]:
        return {"beta_lo": self.beta_lo.to_json(), "beta_hi": self.beta_hi.to_json()}


def _twisted_e1_sign(e0: Fraction, e1: Fraction, beta: Surd) -> int:
    """Sign of e1 - beta*e0."""
    return beta.affine(-e0, e1).sign()


def admissible_on(v: ChernVector, interval: HeartInterval) -> bool:
    return all(_twisted_e1_sign(v.e0, v.e1, b) >= 0 for b in interval.endpoints)


def heart_pair_ok(v: ChernVector, e0: Fraction, e1: Fraction, interval: HeartInterval) -> bool:
    """0 <= e1 - beta*e0 <= v.e1 - beta*v.e0 at both ends of the interval."""
    for b in interval.endpoints:
        if _twisted_e1_sign(e0, e1, b) < 0:
            return False
        if _twisted_e1_sign(v.e0 - e0, v.e1 - e1, b) < 0:
            return False
    return True


def _multiples(step: Fraction, lo: Fraction, hi: Fraction) -> range:
    return range(math.ceil(lo / step), math.floor(hi / step) + 1)


def _pairs_for_e0(
    v: ChernVector, interval: HeartInterval, e0: Fraction, step1: Fraction
) -> list[tuple[Fraction, Fraction]]:
    # e1 >= beta*e0 and e1 <= v.e1 - beta*(v.e0 - e0) at each endpoint; bracket
    # those bounds by rationals and confirm every candidate exactly.
    lows, highs = [], []
    for b in interval.endpoints:
        lows.append(b.affine(e0).bracket()[0])
        highs.append(b.affine(e0 - v.e0, v.e1).bracket()[1])
    lo, hi = max(lows), min(highs)
    out = []
    for k in range(math.floor(lo / step1), math.ceil(hi / step1) + 1):
        e1 = k * step1
        if heart_pair_ok(v, e0, e1, interval):
            out.append((e0, e1))
    return out


def _chunk_worker(args) -> list[tuple[Fraction, Fraction]]:
    v, interval, e0s, step1 = args
    out = []
    for e0 in e0s:
        out.extend(_pairs_for_e0(v, interval, e0, step1))
    return out


def heart_bounds(
    v: ChernVector,
    interval: HeartInterval,
    e0_min: RationalLike,
    e0_max: RationalLike,
    lattice: Lattice | None,
    *,
    workers: int = 1,
) -> list[tuple[Fraction, Fraction]]:
    """Lattice pairs (e0, e1) that stay in the heart between 0 and v on the interval.

    ``lattice=None`` drops integrality of e0 and e1 beyond Z (test hook for
    showing that the lattice step matters).
    """
    e0_min, e0_max = as_rational(e0_min), as_rational(e0_max)
    if e0_min > e0_max:
        raise ValueError("e0_min > e0_max")
    if not admissible_on(v, interval):
        raise ValueError("v is not in the heart at an endpoint of the interval")
    step0 = lattice.d0 if lattice else Fraction(1)
    step1 = lattice.d1 if lattice else Fraction(1)
    e0s = [k * step0 for k in _multiples(step0, e0_min, e0_max)]
    if workers <= 1 or len(e0s) < 2:
        pairs = _chunk_worker((v, interval, e0s, step1))
    else:
        chunks = [e0s[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_chunk_worker, [(v, interval, c, step1) for c in chunks if c])
            pairs = [p for part in parts for p in part]
    return sorted(pairs)


def _solve_affine_2(rows: Iterable[tuple[Fraction, Fraction, Fraction]]):
    """Solve a*u + b*t = r over the rationals.

    Returns None (inconsistent), ("point", u, t), ("line", (u0, t0), (du, dt))
    or ("plane",).
    """
    rows = [(Fraction(a), Fraction(b), Fraction(r)) for a, b, r in rows]
    pivots = []
    for a, b, r in rows:
        for pa, pb, pr, col in sorted(pivots, key=lambda piv: piv[3]):
            if col == 0 and a:
                f = a / pa
                a, b, r = a - f * pa, b - f * pb, r - f * pr
            elif col == 1 and b:
                f = b / pb
                a, b, r = a - f * pa, b - f * pb, r - f * pr
        if a:
            pivots.append((a, b, r, 0))
        elif b:
            pivots.append((a, b, r, 1))
        elif r:
            return None
    if not pivots:
        return ("plane",)
    if len(pivots) == 1:
        a, b, r, col = pivots[0]
        if col == 0:
            return ("line", (r / a, Fraction(0)), (-b / a, Fraction(1)))
        return ("line", (Fraction(0), r / b), (Fraction(1), Fraction(0)))
    (a1, b1, r1, c1), (a2, b2, r2, c2) = pivots[:2]
    if c1 == 1:
        (a1, b1, r1), (a2, b2, r2) = (a2, b2, r2), (a1, b1, r1)
    # a2 == 0 after elimination
    t = r2 / b2
    u = (r1 - b1 * t) / a1
    return ("point", u, t)


def solve_e2_for_wall(
    v: ChernVector, e0: RationalLike, e1: RationalLike, target: WallLocus
) -> E2Solutions:
    """All e2 with wall_between(v, (e0, e1, e2, *)) equal to ``target`` as a locus.

    Unknowns are e2 and the proportionality factor lam != 0 in
    wall_between(...) = lam * target.
    """
    if not target.realizable:
        raise ValueError("target wall is not realizable")
    e0, e1 = as_rational(e0), as_rational(e1)
    X, Y, Z = target
    x = (e0 * v.e1 - v.e0 * e1) / 2
    sol = _solve_affine_2(
        [
            (Fraction(0), X, x),
            (v.e0, -Y, e0 * v.e2),
            (-v.e1, -Z, -e1 * v.e2),
        ]
    )
    if sol is None:
        return []
    if sol[0] == "point":
        _, e2, lam = sol
        return [e2] if lam != 0 else []
    if sol[0] == "plane":
        return ANY_E2
    _, (u0, t0), (du, dt) = sol
    if du == 0:
        # e2 fixed, lam free along a line: some lam != 0 exists
        return [u0]
    if dt == 0 and t0 == 0:
        return []
    return ANY_E2


@dataclass(frozen=True)
class RayCheck:
    beta0: Fraction
    twisted_e1: Fraction
    admissible: tuple[Fraction, ...]
    stable: bool
    degenerate: bool

    def __bool__(self) -> bool:
        return self.stable

    @property
    def explanation(self) -> str:
        vals = ", ".join(format_rational(t) for t in self.admissible)
        if self.degenerate:
            return f"twisted e1 vanishes at beta={format_rational(self.beta0)}; the class has infinite slope there"
        if self.stable:
            return (
                f"admissible twisted e1 of a subobject at beta={format_rational(self.beta0)}: {{{vals}}}; "
                "every option gives a subobject or quotient of infinite slope, so no wall crosses this ray"
            )
        return (
            f"admissible twisted e1 values {{{vals}}} include interior values; "
            "the ray argument is inconclusive"
        )

    def to_json(self) -> dict:
        return {
            "beta": format_rational(self.beta0),
            "twisted_e1": format_rational(self.twisted_e1),
            "admissible_twisted_e1": [format_rational(t) for t in self.admissible],
            "stable": self.stable,
            "degenerate": self.degenerate,
            "explanation": self.explanation,
        }


def _rational_gcd(a: Fraction, b: Fraction) -> Fraction:
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(math.gcd(int(a * den), int(b * den)), den)


def vertical_ray_stable(v: ChernVector, beta0: RationalLike, lattice: Lattice) -> RayCheck:
    """Check whether any wall for ``v`` can cross the vertical ray beta = beta0."""
    beta0 = as_rational(beta0)
    top = twist(v, beta0).e1
    if top < 0:
        raise ValueError("v is not in the heart at beta0")
    if top == 0:
        return RayCheck(beta0, top, (Fraction(0),), True, True)
    # twisted e1 of a lattice class ranges over the group generated by d1 and beta0*d0
    step = _rational_gcd(lattice.d1, beta0 * lattice.d0)
    values = tuple(k * step for k in range(0, math.floor(top / step) + 1))
    stable = all(t == 0 or t == top for t in values)
    return RayCheck(beta0, top, values, stable, False)


@dataclass
class CandidateReport:
    e0: Fraction
    e1: Fraction
    e2_solutions: E2Solutions
    constraints_log: list[tuple[str, bool]] = field(default_factory=list)
    induced_wall: WallLocus | None = None
    matches_target: bool = False

    def to_json(self) -> dict:
        sols = "any" if self.e2_solutions is ANY_E2 else [format_rational(q) for q in self.e2_solutions]
        return {
            "e0": format_rational(self.e0),
            "e1": format_rational(self.e1),
            "e2_solutions": sols,
            "constraints": [{"name": n, "passed": ok} for n, ok in self.constraints_log],
            "induced_wall": self.induced_wall.to_json() if self.induced_wall else None,
            "matches_target": self.matches_target,
        }


def _lattice_e2(e2: Fraction, lattice: Lattice | None) -> bool:
    return lattice is None or (e2 / lattice.d2).denominator == 1


def evaluate_candidate(
    v: ChernVector,
    e0: Fraction,
    e1: Fraction,
    target: WallLocus,
    lattice: Lattice | None,
    interval: HeartInterval,
    *,
    bogomolov_filter: bool = False,
) -> CandidateReport:
    f_ok = all(_twisted_e1_sign(e0, e1, b) >= 0 for b in interval.endpoints)
    g_ok = all(_twisted_e1_sign(v.e0 - e0, v.e1 - e1, b) >= 0 for b in interval.endpoints)
    log: list[tuple[str, bool]] = [("heart_subobject", f_ok), ("heart_quotient", g_ok)]
    if lattice is not None:
        log.append(("lattice_e0_e1", (e0 / lattice.d0).denominator == 1 and (e1 / lattice.d1).denominator == 1))
    sols = solve_e2_for_wall(v, e0, e1, target)
    log.append(("e2_solution_exists", sols is ANY_E2 or bool(sols)))
    if sols is ANY_E2:
        # at most one e2 fails, so three consecutive lattice values contain a witness
        step = lattice.d2 if lattice else Fraction(1)
        valid = [k * step for k in range(3)]
    else:
        valid = [e2 for e2 in sols if _lattice_e2(e2, lattice)]
        if sols:
            log.append(("lattice_e2", bool(valid)))
    if bogomolov_filter and valid:
        kept = []
        for e2 in valid:
            f = ChernVector(e0, e1, e2, 0)
            if discriminant(f) >= 0 and discriminant(v - f) >= 0:
                kept.append(e2)
        log.append(("bogomolov_sub_and_quotient", bool(kept)))
        valid = kept
    induced = None
    matches = False
    for e2 in valid:
        w = wall_between(v, ChernVector(e0, e1, e2, 0))
        if w is not None and w.realizable and walls_nested(w, target) is Nesting.IDENTICAL:
            induced, matches = w, True
            break
    return CandidateReport(e0, e1, sols, log, induced, matches and f_ok and g_ok)


@dataclass
class VerificationReport:
    variety: str
    v: ChernVector
    divisor: DivisorClass | None
    target: WallLocus
    vertical_ray_result: RayCheck | None
    heart_interval: HeartInterval | None
    e0_range: tuple[Fraction, Fraction] | None
    line_bundle_bound: bool
    enumeration_result: list[CandidateReport]
    lattice_excluded: list[CandidateReport]
    conclusion: Conclusion
    witness_point: TiltPoint | None
    notes: list[str]

    @property
    def matches(self) -> list[CandidateReport]:
        return [c for c in self.enumeration_result if c.matches_target]

    def to_json(self) -> dict:
        witness_q = q_form(self.v, self.witness_point) if self.witness_point else None
        return {
            "report_version": REPORT_VERSION,
            "variety": self.variety,
            "divisor": str(self.divisor) if self.divisor is not None else None,
            "class": self.v.to_json(),
            "q_wall": self.target.to_json(),
            "vertical_ray": self.vertical_ray_result.to_json() if self.vertical_ray_result else None,
            "heart_interval": self.heart_interval.to_json() if self.heart_interval else None,
            "e0_range": [format_rational(x) for x in self.e0_range] if self.e0_range else None,
            "line_bundle_bound": self.line_bundle_bound,
            "enumeration": [c.to_json() for c in self.enumeration_result],
            "lattice_excluded": [c.to_json() for c in self.lattice_excluded],
            "conclusion": self.conclusion.value,
            "witness": self.witness_point.to_json() if self.witness_point else None,
            "witness_q": format_rational(witness_q) if witness_q is not None else None,
            "notes": list(self.notes),
        }


def scan_candidates(
    v: ChernVector,
    target: WallLocus,
    interval: HeartInterval,
    e0_min: RationalLike,
    e0_max: RationalLike,
    lattice: Lattice | None,
    *,
    bogomolov_filter: bool = False,
    workers: int = 1,
) -> list[CandidateReport]:
    pairs = heart_bounds(v, interval, e0_min, e0_max, lattice, workers=workers)
    return [
        evaluate_candidate(v, e0, e1, target, lattice, interval, bogomolov_filter=bogomolov_filter)
        for e0, e1 in pairs
    ]


def verify_class(
    preset: VarietyPreset,
    v: ChernVector,
    region_margin: RationalLike = DEFAULT_REGION_MARGIN,
    *,
    divisor: DivisorClass | None = None,
    line_bundle: bool = False,
    e0_max: RationalLike | None = None,
    enforce_lattice: bool = True,
    bogomolov_filter: bool = False,
    workers: int = 1,
) -> VerificationReport:
    """Run the counterexample pipeline for the class ``v``.

    ``region_margin`` places the witness at beta = center, s = margin * r^2
    and must lie strictly between 0 and 1 whenever the Q-wall is a semicircle.
    """
    margin = as_rational(region_margin)
    W = q_wall(v)
    notes: list[str] = []
    report = VerificationReport(
        variety=preset.name,
        v=v,
        divisor=divisor,
        target=W,
        vertical_ray_result=None,
        heart_interval=None,
        e0_range=None,
        line_bundle_bound=line_bundle,
        enumeration_result=[],
        lattice_excluded=[],
        conclusion=Conclusion.INCONCLUSIVE,
        witness_point=None,
        notes=notes,
    )
    sh = shape(W)
    if discriminant(v) < 0:
        notes.append("discriminant is negative: the region Q < 0 is unbounded")
        return report
    if not isinstance(sh, Semicircle):
        notes.append(f"Q-wall is {sh.kind}; there is no bounded disc with Q < 0")
        return report
    if not 0 < margin < 1:
        raise ValueError("region_margin must lie strictly between 0 and 1")

    interval = HeartInterval(sh.left, sh.right)
    report.heart_interval = interval
    if not admissible_on(v, interval):
        notes.append("class leaves the heart on the beta-extent of its Q-wall")
        return report

    lattice = preset.lattice if enforce_lattice else None
    if not enforce_lattice:
        notes.append("lattice check disabled")

    if sh.right.is_rational:
        report.vertical_ray_result = vertical_ray_stable(v, sh.right.as_fraction(), preset.lattice)
    else:
        notes.append(f"right end of the Q-wall, beta = {sh.right}, is irrational; ray argument skipped")

    top = as_rational(e0_max) if e0_max is not None else DEFAULT_E0_FACTOR * max(abs(v.e0), preset.lattice.d0)
    bottom = v.e0 if line_bundle else -top
    if bottom > top:
        notes.append("rank bound exceeds e0_max; nothing to enumerate")
        top = bottom
    report.e0_range = (bottom, top)
    cands = scan_candidates(
        v, W, interval, bottom, top, lattice, bogomolov_filter=bogomolov_filter, workers=workers
    )
    report.enumeration_result = cands

    if lattice is not None:
        kept = {(c.e0, c.e1) for c in cands}
        loose = heart_bounds(v, interval, bottom, top, None, workers=workers)
        report.lattice_excluded = [
            evaluate_candidate(v, e0, e1, W, None, interval, bogomolov_filter=bogomolov_filter)
            for e0, e1 in loose
            if (e0, e1) not in kept
        ]
        for c in report.lattice_excluded:
            if c.matches_target:
                notes.append(
                    f"(e0, e1) = ({format_rational(c.e0)}, {format_rational(c.e1)}) would realize the Q-wall "
                    "but is not a lattice class"
                )

    if report.matches:
        report.conclusion = Conclusion.WALL_CANDIDATE_FOUND
        notes.append("a lattice class realizes the Q-wall numerically; no counterexample is claimed")
        return report

    ray = report.vertical_ray_result
    if ray is None or not ray.stable:
        notes.append("no numerical candidate for the Q-wall, but the vertical ray argument did not close")
        return report

    witness = TiltPoint(margin * sh.radius_sq, sh.center)
    if q_form(v, witness) >= 0:
        notes.append("witness point does not have Q < 0")
        return report
    report.witness_point = witness
    report.conclusion = Conclusion.COUNTEREXAMPLE_CONFIRMED
    notes.append(
        "The class is tilt-stable for large alpha and along the ray beta = "
        f"{format_rational(ray.beta0)}. Walls for a fixed class are nested, so any wall meeting the Q < 0 disc "
        "lies inside the Q-wall, and the Q-wall itself is not realized by any lattice class in the heart. "
        "Hence the class is stable at points just inside the Q-wall, where Q < 0. "
        "Stability is not certified at the witness itself; the witness only exhibits Q < 0 in the disc."
    )
    return report


def verify_counterexample(
    preset: VarietyPreset,
    D: DivisorClass,
    region_margin: RationalLike = DEFAULT_REGION_MARGIN,
    *,
    line_bundle: bool = True,
    **kwargs,
) -> VerificationReport:
    """Pipeline for the line bundle O(D); the subobject rank bound is on by default."""
    v = preset.chern_of_line_bundle(D)
    return verify_class(preset, v, region_margin, divisor=D, line_bundle=line_bundle, **kwargs)
