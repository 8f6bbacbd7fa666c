"""JSON persistence, SVG Stokes diagrams and the command-line driver.

All rationals are written as "p/q" strings and polynomials in the canonical
form of ``format_poly``, so printing a parsed document reproduces it.
Matrix positions in JSON are 1-based.

Exit codes: 0 on success, 1 when the input is well formed but fails a
mathematical check, 2 on usage errors (bad arguments, unreadable or
malformed files).  Errors are reported on stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence
from xml.sax.saxutils import escape

from .circle_arith import Angle, CoverPoint
from .errors import IncompleteAssignment, ParseError, SizeMismatch, StokesError
from .examples import EXAMPLES
from .fourier import FourierResult, fourier_pipeline
from .irregular import ExponentCircle, IrregularClass, Modulus, validate_assumption
from .legendre import FormalTransform
from .representation import (
    DeformationDatum,
    StokesFactor,
    StokesRepresentation,
    Strand,
    deformation_data,
    validate,
)
from .stokes_geometry import singular_directions, stokes_arrows
from .symbolic import ONE, ZERO, MonomialMatrix, SymbolicMatrix, format_poly, parse_poly

# -- JSON ----------------------------------------------------------------------


def _rat(x: Any, what: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError(f"{what} must be a rational written as a string, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{what}: cannot read {x!r} as a rational") from exc


def _key(obj: dict, name: str, where: str) -> Any:
    if not isinstance(obj, dict) or name not in obj:
        raise ParseError(f"{where} is missing the key {name!r}")
    return obj[name]


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{what} must be an integer, got {x!r}")
    return x


def class_to_json(theta: IrregularClass) -> dict:
    return {"circles": [{"coeff_arg_turns": str(c.coeff_arg), "coeff_modulus": str(c.coeff_modulus),
                         "slope": str(c.slope), "multiplicity": m} for c, m in theta.entries]}


def class_from_json(obj: Any) -> IrregularClass:
    entries = []
    for i, c in enumerate(_key(obj, "circles", "class")):
        where = f"circle {i + 1}"
        modulus = _key(c, "coeff_modulus", where) if "coeff_modulus" in c else "1"
        try:
            circle = ExponentCircle(_rat(_key(c, "coeff_arg_turns", where), where),
                                    _rat(_key(c, "slope", where), where),
                                    Modulus.parse(str(modulus)))
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from exc
        mult = _int(c.get("multiplicity", 1), f"{where} multiplicity")
        if mult < 1:
            raise ParseError(f"{where}: multiplicity must be positive")
        entries.append((circle, mult))
    return IrregularClass(tuple(entries))


def _point_json(p: CoverPoint) -> dict:
    return {"circle": p.circle_id, "lift": str(p.lift)}


def _strand_json(s: Strand) -> dict:
    return {"circle": s.circle_id, "lift": str(s.lift), "copy": s.copy}


def _poly(text: Any, what: str):
    if isinstance(text, int) and not isinstance(text, bool):
        text = str(text)
    if not isinstance(text, str):
        raise ParseError(f"{what} must be a polynomial string, got {text!r}")
    return parse_poly(text)


def matrix_to_json(m: SymbolicMatrix) -> list[list[str]]:
    return m.to_lists()


def rep_to_json(rep: StokesRepresentation, target_base: Angle | None = None) -> dict:
    out: dict[str, Any] = {
        "class": class_to_json(rep.theta),
        "base_turns": str(rep.base),
        "strand_order": [_strand_json(s) for s in rep.strands],
        "formal_monodromy": {"perm": [p + 1 for p in rep.h.perm],
                             "diag": [format_poly(x) for x in rep.h.diag]},
        "factors": [{"direction_turns": str(f.direction),
                     "entries": [{"row": i + 1, "col": j + 1, "value": format_poly(f.matrix[i, j])}
                                 for i, j in f.matrix.nonzero_offdiagonal()]}
                    for f in rep.factors],
    }
    if target_base is not None:
        out["fourier_base_turns"] = str(target_base)
    return out


def rep_from_json(obj: Any) -> StokesRepresentation:
    theta = class_from_json(_key(obj, "class", "representation"))
    base = _rat(_key(obj, "base_turns", "representation"), "base_turns")
    strands = []
    for i, s in enumerate(_key(obj, "strand_order", "representation")):
        where = f"strand {i + 1}"
        cid = _int(_key(s, "circle", where), where)
        if not 0 <= cid < len(theta.entries):
            raise ParseError(f"{where} refers to circle {cid}, which does not exist")
        lift = _rat(_key(s, "lift", where), where)
        strands.append(Strand(CoverPoint(cid, lift, theta.circles[cid].ramification),
                              _int(s.get("copy", 0), where)))
    n = len(strands)
    fm = _key(obj, "formal_monodromy", "representation")
    perm = [_int(p, "perm entry") - 1 for p in _key(fm, "perm", "formal_monodromy")]
    diag = [_poly(x, "diag entry") for x in _key(fm, "diag", "formal_monodromy")]
    if len(perm) != n or len(diag) != n or sorted(perm) != list(range(n)):
        raise SizeMismatch(f"formal monodromy must be a permutation of {n} strands with {n} entries")
    factors = []
    for k, f in enumerate(_key(obj, "factors", "representation")):
        where = f"factor {k + 1}"
        rows = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        for e in _key(f, "entries", where):
            i, j = _int(_key(e, "row", where), where) - 1, _int(_key(e, "col", where), where) - 1
            if not (0 <= i < n and 0 <= j < n):
                raise SizeMismatch(f"{where} has an entry at ({i + 1}, {j + 1}) outside a {n}x{n} matrix")
            rows[i][j] = _poly(_key(e, "value", where), where)
        direction = _rat(_key(f, "direction_turns", where), where)
        factors.append(StokesFactor(direction, SymbolicMatrix(rows, strands, strands)))
    return StokesRepresentation(theta, base, tuple(strands), MonomialMatrix(perm, diag, strands),
                                tuple(factors))


def target_base_from_json(obj: Any) -> Angle | None:
    if isinstance(obj, dict) and "fourier_base_turns" in obj:
        return _rat(obj["fourier_base_turns"], "fourier_base_turns")
    return None


def data_to_json(data: Sequence[DeformationDatum]) -> list[dict]:
    return [{"source": d.arrow.source.label(), "target": d.arrow.target.label(),
             "direction_turns": str(d.arrow.direction),
             "source_midpoint": _point_json(d.arrow.source.midpoint),
             "target_midpoint": _point_json(d.arrow.target.midpoint),
             "value": matrix_to_json(d.value)} for d in data]


def formal_to_json(ft: FormalTransform) -> dict:
    return {
        "gluings": [{"circle": cid, "point_lift": str(p), "block": matrix_to_json(m)}
                    for (cid, p), m in sorted(ft.system.gluings.items())],
        "signs": [{"circle": cid, "point_lift": str(p), "sign": s} for (cid, p), s in sorted(ft.signs.items())],
        "interval_pairs": [{"circle": cid, "source_index": i, "target_index": j}
                           for cid, i, j in ft.interval_pairs],
    }


def transform_to_json(res: FourierResult, emit_formal: bool = False, emit_data: bool = False) -> dict:
    out = rep_to_json(res.output)
    if emit_formal:
        out["formal"] = formal_to_json(res.formal)
    if emit_data:
        out["deformation_data"] = data_to_json(res.data)
    return out


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# -- SVG -----------------------------------------------------------------------

PALETTE = ["#1f4e9c", "#c0392b", "#1e8449", "#8e44ad", "#d35400", "#117a65"]


@dataclass(frozen=True)
class SvgOptions:
    size: int = 480
    stroke: float = 1.6
    labels: bool = True
    legend: bool = True
    samples_per_turn: int = 720
    amplitude: float = 0.35


def _z_chart(direction: float, radius: float, centre: float) -> tuple[float, float]:
    # The data chart is the z-chart with orientation reversed; the SVG y axis points down.
    ang = -2 * math.pi * direction
    return centre + radius * math.cos(ang), centre - radius * math.sin(ang)


def _fmt(x: float) -> str:
    out = f"{x:.2f}"
    return "0.00" if out == "-0.00" else out


def render_diagram(theta: IrregularClass, rep: StokesRepresentation | None = None,
                   options: SvgOptions = SvgOptions()) -> str:
    """Strands as polar curves of exp(Re q), punctures at singular directions, dashed arrows."""
    size = options.size
    centre = size / 2
    r0 = 0.28 * size
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           '<defs><marker id="head" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" '
           'markerHeight="6" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="#444"/>'
           '</marker></defs>',
           f'<circle class="reference" cx="{_fmt(centre)}" cy="{_fmt(centre)}" r="{_fmt(r0)}" '
           'fill="none" stroke="#999" stroke-width="1" stroke-dasharray="1,4"/>']
    if not theta.entries:
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def radius(c: ExponentCircle, lift: Fraction | float) -> float:
        return r0 * math.exp(options.amplitude * math.cos(2 * math.pi * float(c.phase(Fraction(lift)))))

    for cid, c in enumerate(theta.circles):
        r = c.ramification
        count = options.samples_per_turn * r
        pts = []
        for i in range(count):
            lift = Fraction(i * r, count)
            pts.append(_z_chart(float(lift), radius(c, lift), centre))
        d = "M" + " L".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts) + " Z"
        out.append(f'<path class="strand" data-circle="{cid}" d="{d}" fill="none" '
                   f'stroke="{PALETTE[cid % len(PALETTE)]}" stroke-width="{options.stroke}"/>')

    sing = singular_directions(theta)
    labels = {}
    if rep is not None:
        labels = {f.direction: f"S{i + 1}" for i, f in enumerate(rep.factors)}
    for d in sing:
        x, y = _z_chart(float(d), 0.55 * r0, centre)
        out.append(f'<circle class="puncture" data-direction="{d}" cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" '
                   'fill="white" stroke="#222" stroke-width="1.2"/>')
        if options.labels and d in labels:
            lx, ly = _z_chart(float(d), 0.42 * r0, centre)
            out.append(f'<text class="factor-label" x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="12" '
                       f'text-anchor="middle" dominant-baseline="middle">{labels[d]}</text>')

    for a in stokes_arrows(theta):
        cs, ct = theta.circles[a.source_point.circle_id], theta.circles[a.target_point.circle_id]
        x1, y1 = _z_chart(float(a.direction), radius(cs, a.source_point.lift), centre)
        x2, y2 = _z_chart(float(a.direction), radius(ct, a.target_point.lift), centre)
        out.append(f'<line class="arrow" data-direction="{a.direction}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
                   f'x2="{_fmt(x2)}" y2="{_fmt(y2)}" stroke="#444" stroke-width="1" '
                   'stroke-dasharray="4,3" marker-end="url(#head)"/>')

    if rep is not None:
        x1, y1 = _z_chart(float(rep.base), 0.1 * r0, centre)
        x2, y2 = _z_chart(float(rep.base), 1.6 * r0, centre)
        out.append(f'<line class="base" x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                   'stroke="#888" stroke-width="1"/>')

    if options.legend:
        lines = [(PALETTE[cid % len(PALETTE)], f"circle {cid}: {c} x{m}")
                 for cid, (c, m) in enumerate(theta.entries)]
        lines.append(("#444", "z-plane view: positive data orientation appears clockwise"))
        out.append('<g class="legend" font-size="11">')
        for i, (colour, text) in enumerate(lines):
            out.append(f'<text x="8" y="{16 + 14 * i}" fill="{colour}">{escape(text)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- command line --------------------------------------------------------------


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    input: Path | None = None
    output: Path | None = None
    mode: str = "symbolic"
    assign: Path | None = None
    svg: SvgOptions = field(default_factory=SvgOptions)
    target_base: Angle | None = None
    strict: bool = False
    emit_formal: bool = False
    emit_data: bool = False
    relation: bool = True
    example: str | None = None

    def __post_init__(self) -> None:
        if self.mode == "numeric" and self.assign is None:
            raise UsageError("numeric mode needs --assign")
        if self.mode != "numeric" and self.assign is not None:
            raise UsageError("--assign is only used with --mode numeric")


def _load_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        path.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def load_assignment(obj: Any) -> dict[str, Fraction]:
    if not isinstance(obj, dict):
        raise ParseError("an assignment is a JSON object mapping names to rationals")
    return {str(k): _rat(v, f"value of {k}") for k, v in obj.items()}


def apply_assignment(rep: StokesRepresentation, assignment: dict[str, Fraction]) -> StokesRepresentation:
    missing = sorted(rep.variables() - set(assignment))
    if missing:
        raise IncompleteAssignment("the assignment does not cover every variable", missing=missing)
    return rep.eval(assignment)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stokes-fourier",
                                description="Stokes data of irregular connections and their Fourier transforms.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    v = sub.add_parser("validate", help="check a representation")
    v.add_argument("input", type=Path)
    v.add_argument("--no-relation", action="store_true", help="check shapes and patterns only")

    d = sub.add_parser("diagram", help="draw the Stokes diagram of a class or representation")
    d.add_argument("input", type=Path)
    d.add_argument("--svg", type=Path, required=True)
    d.add_argument("--size", type=int, default=480)
    d.add_argument("--stroke", type=float, default=1.6)
    d.add_argument("--no-labels", action="store_true")
    d.add_argument("--no-legend", action="store_true")

    t = sub.add_parser("transform", help="Stokes data of the Fourier transform")
    t.add_argument("input", type=Path)
    t.add_argument("-o", "--output", type=Path)
    t.add_argument("--mode", choices=["symbolic", "numeric"], default="symbolic")
    t.add_argument("--assign", type=Path)
    t.add_argument("--target-base", help="base direction in turns on the transformed side")
    t.add_argument("--strict", action="store_true", help="require the relation on input and output")
    t.add_argument("--emit-formal", action="store_true")
    t.add_argument("--emit-deformation-data", action="store_true")

    dd = sub.add_parser("deformation-data", help="deformation data along the Stokes arrows")
    dd.add_argument("input", type=Path)
    dd.add_argument("-o", "--output", type=Path)

    e = sub.add_parser("examples", help="write a bundled example and its expected transform")
    e.add_argument("name", choices=sorted(EXAMPLES))
    e.add_argument("-o", "--output", type=Path, required=True)
    return p


def parse_config(argv: Sequence[str]) -> RunConfig:
    args = _parser().parse_args(argv)
    cfg = RunConfig(args.subcommand)
    if args.subcommand == "examples":
        cfg.example, cfg.output = args.name, args.output
        return cfg
    cfg.input = args.input
    cfg.output = getattr(args, "output", None)
    if args.subcommand == "validate":
        cfg.relation = not args.no_relation
    elif args.subcommand == "diagram":
        cfg.output = args.svg
        cfg.svg = SvgOptions(size=args.size, stroke=args.stroke, labels=not args.no_labels,
                             legend=not args.no_legend)
    elif args.subcommand == "transform":
        cfg = RunConfig(args.subcommand, args.input, args.output, args.mode, args.assign,
                        strict=args.strict, emit_formal=args.emit_formal,
                        emit_data=args.emit_deformation_data)
        if args.target_base is not None:
            cfg.target_base = _rat(args.target_base, "--target-base")
    return cfg


def run(cfg: RunConfig) -> None:
    if cfg.subcommand == "examples":
        ex = EXAMPLES[cfg.example]()
        try:
            cfg.output.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise UsageError(f"cannot create {cfg.output}: {exc.strerror}") from exc
        _write(cfg.output / "class.json", dumps(class_to_json(ex.source.theta)))
        _write(cfg.output / "rep.json", dumps(rep_to_json(ex.source, ex.target_base)))
        _write(cfg.output / "expected.json", dumps(rep_to_json(ex.expected)))
        return

    doc = _load_json(cfg.input)
    if cfg.subcommand == "diagram":
        if isinstance(doc, dict) and "class" in doc:
            rep = rep_from_json(doc)
            theta = rep.theta
        else:
            rep, theta = None, class_from_json(doc)
        _write(cfg.output, render_diagram(theta, rep, cfg.svg))
        return

    rep = rep_from_json(doc)
    validate_assumption(rep.theta)
    if cfg.subcommand == "validate":
        validate(rep, strict=cfg.relation)
        _write(None, dumps({"valid": True, "relation_checked": cfg.relation}))
    elif cfg.subcommand == "deformation-data":
        validate(rep, strict=False)
        _write(cfg.output, dumps(data_to_json(deformation_data(rep))))
    elif cfg.subcommand == "transform":
        if cfg.mode == "numeric":
            rep = apply_assignment(rep, load_assignment(_load_json(cfg.assign)))
        base = cfg.target_base if cfg.target_base is not None else target_base_from_json(doc)
        res = fourier_pipeline(rep, base, strict=cfg.strict)
        _write(cfg.output, dumps(transform_to_json(res, cfg.emit_formal, cfg.emit_data)))


def cli(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
        run(cfg)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors and 0 after --help.
        return int(exc.code or 0)
    except UsageError as exc:
        _report({"error": "UsageError", "message": str(exc)})
        return 2
    except (ParseError, IncompleteAssignment) as exc:
        _report(exc.to_json())
        return 2
    except StokesError as exc:
        _report(exc.to_json())
        return 1
    except ValueError as exc:
        _report({"error": "ParseError", "message": str(exc)})
        return 2
    return 0


def _report(obj: dict) -> None:
    sys.stderr.write(json.dumps(obj, default=str) + "\n")


def main() -> None:
    sys.exit(cli())
