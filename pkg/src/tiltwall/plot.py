"""Static SVG diagrams of walls in the (beta, alpha) half-plane.

Geometry is computed exactly and turned into floats only when written.
Drawing happens inside a group whose transform maps data coordinates to
pixels with one uniform scale, so a wall circle is a plain <circle> whose
cx/r are the data values (beta center, radius).
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from fractions import Fraction

from .chern_core import ChernVector, TiltPoint
from .walls import Empty, Semicircle, VerticalLine, WallLocus, shape

SVG_NS = "http://www.w3.org/2000/svg"
MARGIN = 40


def _num(x: float) -> str:
    # repr is locale independent and round-trips exactly
    return repr(float(x))


@dataclass
class WallItem:
    wall: WallLocus
    role: str = "wall"  # "q-wall" or "wall"
    label: str = ""


@dataclass
class PlotSpec:
    beta_range: tuple[Fraction, Fraction]
    alpha_range: tuple[Fraction, Fraction]
    width: int = 800
    height: int = 400
    walls: list[WallItem] = field(default_factory=list)
    shade: WallLocus | None = None
    witness: TiltPoint | None = None

    def __post_init__(self) -> None:
        b0, b1 = self.beta_range
        a0, a1 = self.alpha_range
        if not b0 < b1 or not a0 < a1:
            raise ValueError("plot ranges must be nonempty")
        if a0 < 0:
            raise ValueError("alpha range must lie in [0, oo)")
        if self.width <= 2 * MARGIN or self.height <= 2 * MARGIN:
            raise ValueError("canvas too small")


def auto_spec(
    v: ChernVector,
    q: WallLocus | None,
    others: list[WallLocus] = (),
    *,
    shade: bool = True,
    witness: TiltPoint | None = None,
    width: int = 800,
    height: int = 400,
) -> PlotSpec:
    """Fit the ranges around every requested semicircle and vertical line."""
    lows, highs, tops = [], [], []
    for w in ([q] if q is not None else []) + list(others):
        sh = shape(w)
        if isinstance(sh, Semicircle):
            r = math.sqrt(sh.radius_sq)
            lows.append(float(sh.center) - r)
            highs.append(float(sh.center) + r)
            tops.append(r)
        elif isinstance(sh, VerticalLine):
            lows.append(float(sh.beta))
            highs.append(float(sh.beta))
    if v.e0 != 0:
        mu = float(v.e1 / v.e0)
        lows.append(mu)
        highs.append(mu)
    lo, hi = (min(lows), max(highs)) if lows else (-1.0, 1.0)
    span = max(hi - lo, 1e-3)
    pad = span / 4
    top = max(tops) if tops else span / 2
    spec = PlotSpec(
        (Fraction(lo - pad).limit_denominator(10**6), Fraction(hi + pad).limit_denominator(10**6)),
        (Fraction(0), Fraction(top * 1.25).limit_denominator(10**6) or Fraction(1)),
        width,
        height,
    )
    if q is not None:
        spec.walls.append(WallItem(q, "q-wall", "Q = 0"))
        if shade and isinstance(shape(q), Semicircle):
            spec.shade = q
    spec.walls.extend(WallItem(w, "wall") for w in others)
    spec.witness = witness
    return spec


def render_svg(spec: PlotSpec) -> str:
    b0, b1 = (float(x) for x in spec.beta_range)
    a0, a1 = (float(x) for x in spec.alpha_range)
    k = min((spec.width - 2 * MARGIN) / (b1 - b0), (spec.height - 2 * MARGIN) / (a1 - a0))
    tx = MARGIN - b0 * k
    ty = spec.height - MARGIN + a0 * k

    root = ET.Element(
        "svg",
        {
            "xmlns": SVG_NS,
            "width": str(spec.width),
            "height": str(spec.height),
            "viewBox": f"0 0 {spec.width} {spec.height}",
        },
    )
    defs = ET.SubElement(root, "defs")
    clip = ET.SubElement(defs, "clipPath", {"id": "upper-half"})
    ET.SubElement(
        clip,
        "rect",
        {"x": _num(b0), "y": _num(a0), "width": _num(b1 - b0), "height": _num(a1 - a0)},
    )
    plane = ET.SubElement(
        root,
        "g",
        {
            "id": "plane",
            "transform": f"translate({_num(tx)} {_num(ty)}) scale({_num(k)} {_num(-k)})",
            "data-scale": _num(k),
        },
    )
    stroke = {"vector-effect": "non-scaling-stroke", "stroke-width": "1.5"}
    ET.SubElement(plane, "line", {"class": "axis", "x1": _num(b0), "y1": "0.0", "x2": _num(b1), "y2": "0.0", "stroke": "black", **stroke})
    a_axis = 0.0 if b0 <= 0.0 <= b1 else b0
    ET.SubElement(plane, "line", {"class": "axis", "x1": _num(a_axis), "y1": _num(a0), "x2": _num(a_axis), "y2": _num(a1), "stroke": "black", **stroke})

    body = ET.SubElement(plane, "g", {"clip-path": "url(#upper-half)"})
    if spec.shade is not None:
        sh = shape(spec.shade)
        if isinstance(sh, Semicircle):
            ET.SubElement(
                body,
                "circle",
                {
                    "class": "q-negative",
                    "cx": _num(sh.center),
                    "cy": "0.0",
                    "r": _num(math.sqrt(sh.radius_sq)),
                    "fill": "#d62728",
                    "fill-opacity": "0.2",
                    "stroke": "none",
                },
            )
    for item in spec.walls:
        sh = shape(item.wall)
        color = "#d62728" if item.role == "q-wall" else "#1f77b4"
        if isinstance(sh, Semicircle):
            el = ET.SubElement(
                body,
                "circle",
                {
                    "class": item.role,
                    "cx": _num(sh.center),
                    "cy": "0.0",
                    "r": _num(math.sqrt(sh.radius_sq)),
                    "fill": "none",
                    "stroke": color,
                    **stroke,
                },
            )
        elif isinstance(sh, VerticalLine):
            el = ET.SubElement(
                body,
                "line",
                {"class": item.role, "x1": _num(sh.beta), "y1": _num(a0), "x2": _num(sh.beta), "y2": _num(a1), "stroke": color, **stroke},
            )
        else:
            assert isinstance(sh, Empty)
            continue
        if item.label:
            ET.SubElement(el, "title").text = item.label
    if spec.witness is not None:
        ET.SubElement(
            body,
            "circle",
            {
                "class": "witness",
                "cx": _num(spec.witness.beta),
                "cy": _num(math.sqrt(spec.witness.s)),
                "r": _num(3.0 / k),
                "fill": "black",
            },
        )

    label = {"font-family": "sans-serif", "font-size": "14"}
    ET.SubElement(root, "text", {"x": str(spec.width - MARGIN + 8), "y": _num(ty + 5), **label}).text = "β"
    ET.SubElement(root, "text", {"x": _num(tx + a_axis * k - 5), "y": str(MARGIN - 10), **label}).text = "α"
    for b in (b0, b1):
        ET.SubElement(root, "text", {"x": _num(tx + b * k), "y": _num(ty + 18), "text-anchor": "middle", "font-size": "11", "font-family": "sans-serif"}).text = f"{b:.4g}"
    return ET.tostring(root, encoding="unicode", xml_declaration=False) + "\n"
