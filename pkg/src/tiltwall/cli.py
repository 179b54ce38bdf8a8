"""tiltwall command line: chern, q-wall, wall, scan, verify, plot.

JSON goes to stdout, diagnostics to stderr.  Exit codes:
0 ok (verify: counterexample confirmed), 1 verify found a wall candidate,
2 malformed input, 3 non-integral divisor, 4 verify inconclusive,
5 lattice violation under --strict, 6 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .chern_core import ChernVector, format_rational, parse_rational
from .plot import auto_spec, render_svg
from .search import (
    DEFAULT_E0_FACTOR,
    Conclusion,
    HeartInterval,
    scan_candidates,
    verify_class,
)
from .variety import DivisorClass, NonIntegralDivisor, VarietyPreset, load_preset
from .walls import Semicircle, WallLocus, q_wall, shape, wall_between

EXIT_OK = 0
EXIT_WALL_FOUND = 1
EXIT_USAGE = 2
EXIT_NON_INTEGRAL = 3
EXIT_INCONCLUSIVE = 4
EXIT_LATTICE = 5
EXIT_IO = 6

_VERIFY_EXIT = {
    Conclusion.COUNTEREXAMPLE_CONFIRMED: EXIT_OK,
    Conclusion.WALL_CANDIDATE_FOUND: EXIT_WALL_FOUND,
    Conclusion.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _bool_flag(text: str) -> bool:
    low = text.lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--variety", default="blowup-p3", help="preset name or path to a preset JSON file")
    p.add_argument("--json-indent", type=int, default=2)
    p.add_argument("--strict", action="store_true", help="reject classes outside the preset's lattice")
    p.add_argument(
        "--line-bundle",
        type=_bool_flag,
        nargs="?",
        const=True,
        default=None,
        help="apply the subobject rank bound e0(F) >= e0(v); defaults on for --divisor inputs",
    )
    p.add_argument("--e0-max", default=None, help="upper bound for e0 in the enumeration")
    p.add_argument("--workers", type=int, default=1)
    return p


def _class_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--divisor", help="line bundle O(D), e.g. L or 2L-E")
    g.add_argument("--v", help="class as e0,e1,e2,e3 with rational entries")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="tiltwall", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chern", parents=[common], help="Chern vector of a line bundle")
    p.add_argument("--divisor", required=True)

    p = sub.add_parser("q-wall", parents=[common], help="the Q = 0 locus of a class")
    _class_args(p)

    p = sub.add_parser("wall", parents=[common], help="numerical wall between two classes")
    _class_args(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--w", help="second class e0,e1,e2,e3")
    g.add_argument("--w-divisor", help="second class as a line bundle")

    p = sub.add_parser("scan", parents=[common], help="enumerate candidate subobjects for a target wall")
    _class_args(p)
    p.add_argument("--target", help="target wall x,y,z (default: the Q-wall of the class)")
    p.add_argument("--beta-lo")
    p.add_argument("--beta-hi")
    p.add_argument("--e0-min")

    p = sub.add_parser("verify", parents=[common], help="run the counterexample pipeline")
    _class_args(p)
    p.add_argument("--region-margin", default="1/4", help="witness depth: s = margin * radius^2")

    p = sub.add_parser("plot", parents=[common], help="write an SVG diagram")
    _class_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--wall-with", action="append", default=[], help="also draw the wall with this class")
    p.add_argument(
        "--show",
        default="q-wall,shade,witness",
        help="comma list drawn from q-wall, shade, witness (empty string for axes only)",
    )
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--height", type=int, default=400)
    return parser


def _load(args) -> VarietyPreset:
    try:
        return load_preset(args.variety)
    except KeyError as exc:
        raise CliError(str(exc.args[0]), EXIT_USAGE) from exc
    except (ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"invalid preset: {exc}", EXIT_USAGE) from exc


def _divisor(preset: VarietyPreset, text: str) -> ChernVector:
    try:
        d = DivisorClass.parse(text)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    try:
        return preset.chern_of_line_bundle(d)
    except NonIntegralDivisor as exc:
        raise CliError(str(exc), EXIT_NON_INTEGRAL) from exc
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


def _vector(text: str) -> ChernVector:
    try:
        return ChernVector.parse(text)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


def _rational(text: str | None) -> Fraction | None:
    if text is None:
        return None
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


def _the_class(args, preset: VarietyPreset) -> tuple[ChernVector, bool]:
    """The class and whether it came from a line bundle."""
    if args.divisor is not None:
        v = _divisor(preset, args.divisor)
        from_divisor = True
    else:
        v = _vector(args.v)
        from_divisor = False
    if args.strict and not preset.lattice_check(v):
        raise CliError(f"class {v.to_json()} is not in the lattice of {preset.name}", EXIT_LATTICE)
    return v, from_divisor


def _emit(args, payload) -> None:
    indent = args.json_indent if args.json_indent and args.json_indent > 0 else None
    sys.stdout.write(json.dumps(payload, indent=indent) + "\n")


def cmd_chern(args) -> int:
    preset = _load(args)
    v = _divisor(preset, args.divisor)
    _emit(args, v.to_json())
    return EXIT_OK


def cmd_qwall(args) -> int:
    preset = _load(args)
    v, _ = _the_class(args, preset)
    _emit(args, q_wall(v).to_json())
    return EXIT_OK


def cmd_wall(args) -> int:
    preset = _load(args)
    v, _ = _the_class(args, preset)
    w = _divisor(preset, args.w_divisor) if args.w_divisor else _vector(args.w)
    if args.strict and not preset.lattice_check(w):
        raise CliError(f"class {w.to_json()} is not in the lattice of {preset.name}", EXIT_LATTICE)
    wall = wall_between(v, w)
    _emit(args, wall.to_json() if wall is not None else None)
    return EXIT_OK


def cmd_scan(args) -> int:
    preset = _load(args)
    v, from_divisor = _the_class(args, preset)
    if args.target:
        parts = args.target.split(",")
        if len(parts) != 3:
            raise CliError("--target needs x,y,z", EXIT_USAGE)
        target = WallLocus(*(_rational(p) for p in parts))
    else:
        target = q_wall(v)
    sh = shape(target)
    if not target.realizable:
        raise CliError("target wall is empty", EXIT_USAGE)
    lo, hi = _rational(args.beta_lo), _rational(args.beta_hi)
    if lo is None or hi is None:
        if not isinstance(sh, Semicircle):
            raise CliError("--beta-lo/--beta-hi are required for a vertical target", EXIT_USAGE)
        lo = sh.left if lo is None else lo
        hi = sh.right if hi is None else hi
    line_bundle = from_divisor if args.line_bundle is None else args.line_bundle
    e0_max = _rational(args.e0_max)
    if e0_max is None:
        e0_max = DEFAULT_E0_FACTOR * max(abs(v.e0), preset.lattice.d0)
    e0_min = _rational(args.e0_min)
    if e0_min is None:
        e0_min = v.e0 if line_bundle else -e0_max
    try:
        interval = HeartInterval(lo, hi)
        cands = scan_candidates(v, target, interval, e0_min, e0_max, preset.lattice, workers=args.workers)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    _emit(
        args,
        {
            "class": v.to_json(),
            "target": target.to_json(),
            "interval": interval.to_json(),
            "e0_range": [format_rational(e0_min), format_rational(e0_max)],
            "candidates": [c.to_json() for c in cands],
        },
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    preset = _load(args)
    v, from_divisor = _the_class(args, preset)
    line_bundle = from_divisor if args.line_bundle is None else args.line_bundle
    divisor = DivisorClass.parse(args.divisor) if from_divisor else None
    try:
        report = verify_class(
            preset,
            v,
            _rational(args.region_margin),
            divisor=divisor,
            line_bundle=line_bundle,
            e0_max=_rational(args.e0_max),
            workers=args.workers,
        )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    _emit(args, report.to_json())
    print(f"conclusion: {report.conclusion.value}", file=sys.stderr)
    return _VERIFY_EXIT[report.conclusion]


def cmd_plot(args) -> int:
    preset = _load(args)
    v, from_divisor = _the_class(args, preset)
    show = {s.strip() for s in args.show.split(",") if s.strip()}
    unknown = show - {"q-wall", "shade", "witness"}
    if unknown:
        raise CliError(f"unknown --show items: {', '.join(sorted(unknown))}", EXIT_USAGE)
    others = []
    for text in args.wall_with:
        w = _vector(text) if "," in text else _divisor(preset, text)
        wall = wall_between(v, w)
        if wall is not None and wall.realizable:
            others.append(wall)
    q = q_wall(v)
    witness = None
    if "witness" in show and isinstance(shape(q), Semicircle):
        report = verify_class(preset, v, divisor=None, line_bundle=from_divisor, workers=args.workers)
        witness = report.witness_point
    try:
        spec = auto_spec(
            v,
            q if "q-wall" in show and q.realizable else None,
            others,
            shade="shade" in show,
            witness=witness,
            width=args.width,
            height=args.height,
        )
        svg = render_svg(spec)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from exc
    _emit(args, {"out": args.out, "walls": len(spec.walls), "witness": witness.to_json() if witness else None})
    return EXIT_OK


COMMANDS = {
    "chern": cmd_chern,
    "q-wall": cmd_qwall,
    "wall": cmd_wall,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "plot": cmd_plot,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"tiltwall: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
