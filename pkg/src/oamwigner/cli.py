"""Command-line entry point: ``oamwigner {compute,check,figure}``.

Exit codes: 0 success, 1 check failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import checks
from . import cylinder as cyl
from . import states as st
from .lattice import LWindow

SCHEMA_VERSION = 1
DEFAULT_NPHI = 256
COHERENT_PAD = 8

FIGURES = {
    1: {"kind": "coherent", "l0": 0, "phi0": 0.0, "lmin": -4, "lmax": 4},
    2: {"kind": "coherent", "l0": 0, "phi0": 0.0, "lmin": -4, "lmax": 4},
    3: {"kind": "superpos", "l1": 3, "l2": -3, "phi0": 0.0, "lmin": -4, "lmax": 4},
    4: {"kind": "superpos", "l1": 4, "l2": -3, "phi0": 0.0, "lmin": -4, "lmax": 5},
}


class UsageError(Exception):
    pass


def _num(x: float) -> str:
    return f"{x:.17g}"


def build_state(desc: dict):
    """State and computation window for a descriptor; the display window is ``[lmin, lmax]``."""
    kind = desc["kind"]
    lmin, lmax = desc["lmin"], desc["lmax"]
    if lmin > lmax:
        raise UsageError(f"lmin={lmin} exceeds lmax={lmax}")
    if kind == "coherent":
        label = st.CoherentLabel(desc["l0"], desc["phi0"])
        # Computed on a padded window so the displayed rings are free of truncation.
        window = st.coherent_window(label, margin=COHERENT_PAD, lmin=lmin, lmax=lmax)
        return st.coherent_state(window, label), window
    window = LWindow(lmin, lmax)
    if kind == "superpos":
        label = st.SuperpositionLabel(desc["l1"], desc["l2"], desc["phi0"])
        return st.superposition_state(window, label), window
    if kind == "eigen":
        return st.eigenstate(window, desc["l0"]), window
    raise UsageError(f"unknown state kind {kind!r}")


def compute_field(desc: dict, nphi: int, threads: int | None):
    try:
        state, window = build_state(desc)
        grid = cyl.CylinderGrid(window, nphi)
    except (ValueError, IndexError) as exc:
        raise UsageError(str(exc)) from exc
    fld = cyl.wigner_map(state, grid, workers=threads)
    rows = slice(desc["lmin"] - window.lmin, desc["lmax"] - window.lmin + 1)
    return fld, rows


def _metadata(desc: dict, fld: cyl.WignerField, rows: slice) -> dict:
    vals = fld.values[rows]
    ls = fld.window.ls[rows]
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    neg = np.clip(vals, None, 0.0).sum() * fld.grid.dphi
    return {
        "schema_version": SCHEMA_VERSION,
        "state": desc,
        "display_window": [int(ls[0]), int(ls[-1])],
        "compute_window": [fld.window.lmin, fld.window.lmax],
        "nphi": fld.grid.nphi,
        "phi_range": [-math.pi, math.pi],
        "constants": {
            "inverse_constant": cyl.INVERSE_CONSTANT,
            "traciality_constant": cyl.TRACIALITY_CONSTANT,
        },
        "normalization": fld.total(),
        "negativity": {
            "min_W": float(vals[i, j]),
            "at_l": int(ls[i]),
            "at_phi": float(fld.grid.phis[j]),
            "negative_volume": float(-neg),
        },
    }


def write_outputs(prefix: Path, desc: dict, fld: cyl.WignerField, rows: slice, fmt: str) -> list[Path]:
    prefix.parent.mkdir(parents=True, exist_ok=True)
    ls = fld.window.ls[rows]
    phis = fld.grid.phis
    vals = fld.values[rows]
    p_l, p_phi = cyl.marginals(fld)
    p_l = p_l[rows]
    written = []

    if fmt == "csv":
        path = prefix.with_name(prefix.name + "_field.csv")
        lines = ["l,phi,W"]
        for i, l in enumerate(ls):
            lines += [f"{l},{_num(phi)},{_num(w)}" for phi, w in zip(phis, vals[i])]
        path.write_text("\n".join(lines) + "\n")
    else:
        path = prefix.with_name(prefix.name + "_field.json")
        payload = {"l": ls.tolist(), "phi": phis.tolist(), "W": vals.tolist()}
        path.write_text(json.dumps(payload) + "\n")
    written.append(path)

    path = prefix.with_name(prefix.name + "_marginal_l.csv")
    path.write_text("l,P\n" + "".join(f"{l},{_num(p)}\n" for l, p in zip(ls, p_l)))
    written.append(path)
    path = prefix.with_name(prefix.name + "_marginal_phi.csv")
    path.write_text("phi,P\n" + "".join(f"{_num(phi)},{_num(p)}\n" for phi, p in zip(phis, p_phi)))
    written.append(path)

    path = prefix.with_name(prefix.name + "_meta.json")
    path.write_text(json.dumps(_metadata(desc, fld, rows), indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written


def write_wrapped(path: Path, fld: cyl.WignerField, rows: slice):
    """Cylinder surface ``x = cos phi, y = sin phi, z = l`` coloured by W, one block per ring."""
    ls = fld.window.ls[rows]
    phis = np.append(fld.grid.phis, math.pi)
    vals = fld.values[rows]
    blocks = []
    for i, l in enumerate(ls):
        ring = np.append(vals[i], vals[i, 0])
        blocks.append("\n".join(f"{_num(math.cos(p))} {_num(math.sin(p))} {l} {_num(w)}" for p, w in zip(phis, ring)))
    path.write_text("\n\n".join(blocks) + "\n")


GNUPLOT_TEMPLATE = """\
# Figure {fig}: wrapped cylinder view, unwrapped plane view, marginals.
set terminal pngcairo size 1600,500
set output '{stem}.png'
set multiplot layout 1,4 title '{title}'

set datafile separator whitespace
set view 60,30
set pm3d depthorder
set palette defined (-1 'blue', 0 'white', 1 'red')
set xlabel 'cos(phi)'; set ylabel 'sin(phi)'; set zlabel 'l'
splot '{stem}_wrapped.dat' using 1:2:3:4 with pm3d notitle
unset pm3d

set datafile separator comma
set xlabel 'phi'; set ylabel 'l'
set xrange [-pi:pi]
plot '{stem}_field.csv' skip 1 using 2:1:3 with image notitle

set xlabel 'l'; set ylabel 'P(l)'
set autoscale x
plot '{stem}_marginal_l.csv' skip 1 using 1:2 with impulses lw 3 title 'sum over phi'

set xlabel 'phi'; set ylabel 'P(phi)'
set xrange [-pi:pi]
plot '{stem}_marginal_phi.csv' skip 1 using 1:2 with lines title 'sum over l'

unset multiplot
"""


def cmd_compute(args) -> int:
    desc = {"kind": args.kind, "lmin": args.lmin, "lmax": args.lmax}
    if args.kind == "coherent":
        desc.update(l0=args.l0, phi0=args.phi0)
    elif args.kind == "superpos":
        if args.l1 is None or args.l2 is None:
            raise UsageError("superpos needs --l1 and --l2")
        desc.update(l1=args.l1, l2=args.l2, phi0=args.phi0)
    else:
        desc.update(l0=args.l0)
    fld, rows = compute_field(desc, args.nphi, args.threads)
    try:
        paths = write_outputs(Path(args.out), desc, fld, rows, args.format)
    except OSError as exc:
        raise UsageError(f"cannot write output: {exc}") from exc
    for p in paths:
        print(p)
    return 0


def cmd_figure(args) -> int:
    desc = dict(FIGURES[args.id])
    if args.phi0 is not None:
        desc["phi0"] = args.phi0
    fld, rows = compute_field(desc, args.nphi, args.threads)
    outdir = Path(args.outdir)
    stem = f"fig{args.id}"
    try:
        paths = write_outputs(outdir / stem, desc, fld, rows, "csv")
        wrapped = outdir / f"{stem}_wrapped.dat"
        write_wrapped(wrapped, fld, rows)
        script = outdir / f"{stem}.gp"
        if desc["kind"] == "coherent":
            title = f"coherent state l0={desc['l0']}, phi0={desc['phi0']:.4g}"
        else:
            title = f"superposition l1={desc['l1']}, l2={desc['l2']}, phi0={desc['phi0']:.4g}"
        script.write_text(GNUPLOT_TEMPLATE.format(fig=args.id, stem=stem, title=title))
    except OSError as exc:
        raise UsageError(f"cannot write output: {exc}") from exc
    for p in [*paths, wrapped, script]:
        print(p)
    return 0


def cmd_check(args) -> int:
    suites = ["cylinder", "qudit", "theta"] if args.suite == "all" else [args.suite]
    reports = []
    for name in suites:
        if name == "cylinder":
            try:
                window = LWindow(args.lmin, args.lmax)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            if window.dim < 5:
                raise UsageError("cylinder checks need a window of at least 5 levels")
            res, consts = checks.cylinder_suite(window, nquad=args.nquad)
        elif name == "qudit":
            ds = args.d or [2, 3, 5, 7]
            if any(d < 2 for d in ds):
                raise UsageError("qudit dimensions must be >= 2")
            res, consts = checks.qudit_suite(ds)
        else:
            res, consts = checks.theta_suite()
        reports.append(checks.report(name, res, consts))
    out = reports[0] if len(reports) == 1 else {
        "schema_version": checks.SCHEMA_VERSION,
        "passed": all(r["passed"] for r in reports),
        "suites": reports,
    }
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0 if out["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oamwigner", description="Wigner functions on the angle/angular-momentum cylinder.")
    sub = parser.add_subparsers(dest="command", required=True)
    threads = os.cpu_count() or 1

    p = sub.add_parser("compute", help="compute a Wigner field and its marginals")
    p.add_argument("kind", choices=["coherent", "superpos", "eigen"])
    p.add_argument("--l0", type=int, default=0)
    p.add_argument("--phi0", type=float, default=0.0)
    p.add_argument("--l1", type=int)
    p.add_argument("--l2", type=int)
    p.add_argument("--lmin", type=int, required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--nphi", type=int, default=DEFAULT_NPHI)
    p.add_argument("--out", default="wigner", help="output path prefix")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, default=threads)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("check", help="run invariant suites and emit a JSON report")
    p.add_argument("suite", choices=["cylinder", "qudit", "theta", "all"])
    p.add_argument("--lmin", type=int, default=-6)
    p.add_argument("--lmax", type=int, default=6)
    p.add_argument("--d", type=int, action="append")
    p.add_argument("--nquad", type=int, default=1024)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("figure", help="emit data and a gnuplot script for a figure")
    p.add_argument("id", type=int, choices=sorted(FIGURES))
    p.add_argument("--phi0", type=float)
    p.add_argument("--nphi", type=int, default=DEFAULT_NPHI)
    p.add_argument("--outdir", default=".")
    p.add_argument("--threads", type=int, default=threads)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"oamwigner: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
