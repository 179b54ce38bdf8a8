"""Numerical geometry of a polarized threefold of Picard rank at most two."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping

from .chern_core import ChernVector, as_rational, format_rational, parse_rational

BASIS_NAMES = ("L", "E")

_TERM_RE = re.compile(r"([+-]?)(\d+(?:/\d+)?)?([LE])")


class NonIntegralDivisor(ValueError):
    pass


@dataclass(frozen=True)
class DivisorClass:
    """The class l*L + e*E."""

    l: Fraction = Fraction(0)
    e: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "l", as_rational(self.l))
        object.__setattr__(self, "e", as_rational(self.e))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.l + other.l, self.e + other.e)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.l, -self.e)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def coeffs(self) -> tuple[Fraction, Fraction]:
        return (self.l, self.e)

    @property
    def is_integral(self) -> bool:
        return self.l.denominator == 1 and self.e.denominator == 1

    @classmethod
    def parse(cls, text: str) -> "DivisorClass":
        """Parse strings such as ``L``, ``2L-E``, ``2L-1E``, ``0L+0E`` or ``0``."""
        s = "".join(text.split())
        if s in ("0", "+0", "-0"):
            return cls()
        if not s:
            raise ValueError("empty divisor string")
        pos = 0
        coeffs = {"L": Fraction(0), "E": Fraction(0)}
        seen: set[str] = set()
        while pos < len(s):
            m = _TERM_RE.match(s, pos)
            if m is None or (pos > 0 and not m.group(1)):
                raise ValueError(f"malformed divisor: {text!r}")
            sign, num, name = m.groups()
            if name in seen:
                raise ValueError(f"generator {name} repeated in {text!r}")
            seen.add(name)
            c = parse_rational(num) if num else Fraction(1)
            coeffs[name] = -c if sign == "-" else c
            pos = m.end()
        return cls(coeffs["L"], coeffs["E"])

    def __str__(self) -> str:
        return f"{format_rational(self.l)}L{'+' if self.e >= 0 else '-'}{format_rational(abs(self.e))}E"


L = DivisorClass(1, 0)
E = DivisorClass(0, 1)


@dataclass(frozen=True)
class Lattice:
    """Moduli (d0, d1, d2, d3): a sheaf class has e_i in d_i * Z."""

    d0: Fraction
    d1: Fraction
    d2: Fraction
    d3: Fraction

    def __post_init__(self) -> None:
        for name in ("d0", "d1", "d2", "d3"):
            val = as_rational(getattr(self, name))
            if val <= 0:
                raise ValueError("lattice moduli must be positive")
            object.__setattr__(self, name, val)

    def contains(self, v: ChernVector) -> bool:
        return all((e / d).denominator == 1 for e, d in zip(v, (self.d0, self.d1, self.d2, self.d3)))


@dataclass(frozen=True)
class VarietyPreset:
    name: str
    basis: tuple[str, ...]
    table: Mapping[tuple[int, int, int], Fraction]
    H: DivisorClass
    lattice: Lattice
    ample_forms: tuple[tuple[Fraction, ...], ...] = field(default=())
    description: str = ""

    def __post_init__(self) -> None:
        if not 1 <= len(self.basis) <= 2 or any(b not in BASIS_NAMES for b in self.basis):
            raise ValueError("only bases drawn from L, E with Picard rank <= 2 are supported")
        if len(self.basis) == 1 and self.H.e != 0:
            raise ValueError("polarization uses E but the basis has no E")
        if self.H3 <= 0:
            raise ValueError(f"H^3 = {self.H3} is not positive")
        if self.ample_forms and not self.ample_check(self.H):
            raise ValueError("polarization fails the preset's ampleness test")

    @property
    def H3(self) -> Fraction:
        return self.triple(self.H, self.H, self.H)

    def _vec(self, d: DivisorClass) -> tuple[Fraction, ...]:
        if len(self.basis) == 1:
            if d.e != 0:
                raise ValueError(f"{self.name} has no exceptional class E")
            return (d.l,)
        return d.coeffs()

    def triple(self, a: DivisorClass, b: DivisorClass, c: DivisorClass) -> Fraction:
        av, bv, cv = self._vec(a), self._vec(b), self._vec(c)
        n = len(self.basis)
        total = Fraction(0)
        for i, j, k in itertools.product(range(n), repeat=3):
            coef = av[i] * bv[j] * cv[k]
            if coef:
                total += coef * self.table[tuple(sorted((i, j, k)))]
        return total

    def chern_of_line_bundle(self, d: DivisorClass) -> ChernVector:
        if not d.is_integral:
            raise NonIntegralDivisor(f"divisor {d} is not integral")
        H = self.H
        return ChernVector(
            self.H3,
            self.triple(H, H, d),
            self.triple(H, d, d) / 2,
            self.triple(d, d, d) / 6,
        )

    def lattice_check(self, v: ChernVector) -> bool:
        return self.lattice.contains(v)

    def ample_check(self, d: DivisorClass) -> bool:
        """Strict positivity of every stored linear form (interior of the nef cone)."""
        dv = self._vec(d)
        return all(sum(f * x for f, x in zip(form, dv)) > 0 for form in self.ample_forms)

    @classmethod
    def from_dict(cls, data: Mapping) -> "VarietyPreset":
        basis = tuple(data["basis"])
        idx = {name: i for i, name in enumerate(basis)}
        table: dict[tuple[int, int, int], Fraction] = {}
        for key, val in data["triple"].items():
            if len(key) != 3 or any(ch not in idx for ch in key):
                raise ValueError(f"bad intersection key {key!r}")
            slot = tuple(sorted(idx[ch] for ch in key))
            q = parse_rational(val)
            if slot in table and table[slot] != q:
                raise ValueError(f"conflicting entries for {key!r}")
            table[slot] = q
        for slot in itertools.combinations_with_replacement(range(len(basis)), 3):
            if slot not in table:
                raise ValueError(f"missing intersection number for {''.join(basis[i] for i in slot)}")

        def divisor(spec: Mapping[str, str]) -> DivisorClass:
            return DivisorClass(parse_rational(spec.get("L", "0")), parse_rational(spec.get("E", "0")))

        ample = tuple(
            tuple(parse_rational(form.get(b, "0")) for b in basis) for form in data.get("ample", [])
        )
        return cls(
            name=data["name"],
            basis=basis,
            table=table,
            H=divisor(data["H"]),
            lattice=Lattice(*(parse_rational(x) for x in data["lattice"])),
            ample_forms=ample,
            description=data.get("description", ""),
        )

    def to_dict(self) -> dict:
        table = {
            "".join(self.basis[i] for i in slot): format_rational(q) for slot, q in sorted(self.table.items())
        }
        out = {
            "name": self.name,
            "basis": list(self.basis),
            "triple": table,
            "H": {b: format_rational(c) for b, c in zip(self.basis, self._vec(self.H))},
            "lattice": [format_rational(d) for d in (self.lattice.d0, self.lattice.d1, self.lattice.d2, self.lattice.d3)],
        }
        if self.ample_forms:
            out["ample"] = [{b: format_rational(c) for b, c in zip(self.basis, f)} for f in self.ample_forms]
        return out


def preset_names() -> list[str]:
    root = resources.files(__package__) / "presets"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_preset(name_or_path: str | Path) -> VarietyPreset:
    """Load a shipped preset by name, or any preset JSON file by path."""
    path = Path(name_or_path)
    if path.suffix == ".json" and path.exists():
        return VarietyPreset.from_dict(json.loads(path.read_text()))
    name = str(name_or_path)
    res = resources.files(__package__) / "presets" / f"{name}.json"
    if not res.is_file():
        raise KeyError(f"unknown variety preset {name!r}; shipped: {', '.join(preset_names())}")
    return VarietyPreset.from_dict(json.loads(res.read_text()))


def blowup_p3() -> VarietyPreset:
    return load_preset("blowup-p3")


def p3() -> VarietyPreset:
    return load_preset("p3")

