"""Command-line front end.

Subcommands: ``fresnel``, ``g2``, ``figure`` and ``validate``.  Exit codes are
0 on success, 1 when validation fails, 2 on usage or domain errors and 3 on
I/O errors.  All input is checked before any computation, so a bad flag
never leaves a partial output file behind.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Sequence

from . import __version__, figures, validation
from .coherence import AXES, Axis, ComponentLabel, Setup, sweep
from .fresnel import fresnel_derivatives
from .moments import BeamParams
from .tables import render_csv, render_json, write_output

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

FAULTS = {"rs-sign": validation.faulty_rs_sign}


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


class _Parser(argparse.ArgumentParser):
    # argparse exits by itself; route its messages through our error path instead
    def error(self, message):
        raise UsageError("usage", message)


@dataclass(frozen=True)
class Range:
    start: float
    stop: float
    samples: int


def parse_range(text: str, flag: str, allow_single: bool = False) -> Range:
    parts = text.split(":")
    try:
        if len(parts) == 1 and allow_single:
            v = float(parts[0])
            r = Range(v, v, 1)
        elif len(parts) == 3:
            r = Range(float(parts[0]), float(parts[1]), int(parts[2]))
        else:
            raise ValueError
    except ValueError:
        form = "VALUE or START:STOP:SAMPLES" if allow_single else "START:STOP:SAMPLES"
        raise UsageError(flag, f"expected {form}, got {text!r}") from None
    if not (math.isfinite(r.start) and math.isfinite(r.stop)):
        raise UsageError(flag, "range bounds must be finite")
    if len(parts) == 3 and r.samples < 2:
        raise UsageError(flag, f"need at least 2 samples, got {r.samples}")
    return r


def _grid(r: Range) -> list[float]:
    if r.samples == 1:
        return [r.start]
    return [float(v) for v in Axis("theta", r.start, r.stop, r.samples).values()]


def _check_theta(values, flag: str) -> None:
    for v in values:
        if not 0.0 < v < 90.0:
            raise UsageError(flag, f"angle {v:g} deg outside (0, 90)")


def _check_n(n: float) -> None:
    if not (math.isfinite(n) and n >= 1.0):
        raise UsageError("--n", f"refractive index must be >= 1, got {n:g}")


def _render(rows, columns, header, fmt) -> str:
    return render_json(rows, columns) if fmt == "json" else render_csv(rows, columns, header)


def _emit(text: str, path) -> int:
    try:
        write_output(text, path)
    except OSError as exc:
        print(f"error: --out: cannot write {path or 'stdout'}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_fresnel(args) -> int:
    _check_n(args.n)
    r = parse_range(args.theta, "--theta", allow_single=True)
    grid = _grid(r)
    _check_theta(grid, "--theta")
    rows = figures.fresnel_table(grid, args.n)
    header = {"command": "fresnel", "n": args.n, "theta": args.theta}
    return _emit(_render(rows, figures.COLUMNS["fresnel"], header, args.format), args.out)


def _components(text: str) -> list[ComponentLabel]:
    labels = [t.strip().upper() for t in text.split(",") if t.strip()]
    if not labels:
        raise UsageError("--components", "empty component list")
    try:
        return [ComponentLabel(lab) for lab in labels]
    except ValueError:
        raise UsageError(
            "--components", f"expected a comma list of {','.join(c.value for c in ComponentLabel)}, got {text!r}"
        ) from None


def _setup(args) -> Setup:
    _check_n(args.n)
    _check_theta([args.theta], "--theta")
    for flag, v in (("--dx", args.dx), ("--dy", args.dy), ("--dz", args.dz)):
        if not math.isfinite(v):
            raise UsageError(flag, "must be finite")
    if not args.dz > 0:
        raise UsageError("--dz", f"detector distance must be positive, got {args.dz:g}")
    for flag, v in (("--w0", args.w0), ("--lambda", args.lam)):
        if not (math.isfinite(v) and v > 0):
            raise UsageError(flag, f"must be positive, got {v:g}")
    for flag, v in (("--delta-s", args.delta_s), ("--delta-if", args.delta_if)):
        if not math.isfinite(v):
            raise UsageError(flag, "must be finite")
    beam = BeamParams(w0=args.w0, lam=args.lam, delta_s=args.delta_s, delta_if=args.delta_if)
    return Setup(
        theta=math.radians(args.theta), n=args.n, dz=args.dz,
        dx_over_dz=args.dx / args.dz, dy_over_dz=args.dy / args.dz, beam=beam,
    )


def _axis(args) -> list[Axis]:
    if args.axis is None:
        if args.sweep is not None:
            raise UsageError("--sweep", "requires --axis START:STOP:SAMPLES")
        return []
    if args.sweep is None:
        raise UsageError("--axis", "requires --sweep NAME")
    r = parse_range(args.axis, "--axis")
    ax = Axis(args.sweep, r.start, r.stop, r.samples)
    values = ax.values()
    if ax.name == "theta":
        _check_theta(values, "--axis")
    elif ax.name in ("dz", "w0_over_lambda") and min(values) <= 0:
        raise UsageError("--axis", f"{ax.name} must stay positive over the sweep")
    return [ax]


def cmd_g2(args) -> int:
    labels = _components(args.components)
    setup = _setup(args)
    axes = _axis(args)
    # with no axis this is a sweep over zero axes, i.e. one point
    rows = [r.as_record() for r in sweep(labels, axes, setup)]
    columns = [a.name for a in axes] + ["component", "real", "imag", "magnitude", "envelope", "flags"]
    header = {
        "command": "g2", "n": args.n, "theta_deg": args.theta, "dx_mm": args.dx, "dy_mm": args.dy,
        "dz_mm": args.dz, "w0_mm": args.w0, "lambda_mm": args.lam, "delta_s": args.delta_s,
        "delta_if": args.delta_if, "components": ",".join(str(c) for c in labels),
    }
    if axes:
        header.update(sweep=args.sweep, axis=args.axis)
    return _emit(_render(rows, columns, header, args.format), args.out)


def cmd_figure(args) -> int:
    rows = figures.figure_rows(args.name)
    return _emit(
        _render(rows, figures.COLUMNS[args.name], figures.figure_header(args.name), args.format), args.out
    )


def cmd_validate(args) -> int:
    fresnel_fn = FAULTS[args.inject_fault] if args.inject_fault else fresnel_derivatives
    checks = validation.run_all(fresnel_fn, include_slow=not args.skip_slow)
    info = [] if args.inject_fault else validation.calibration_info()
    if args.format == "text":
        text = validation.format_report(checks, info)
    else:
        rows = [
            dict(check=c.name, status="PASS" if c.passed else "FAIL", measured=c.measured,
                 threshold=c.threshold, detail=c.detail)
            for c in checks
        ]
        cols = ["check", "status", "measured", "threshold", "detail"]
        text = _render(rows, cols, {"command": "validate"}, args.format)
    code = _emit(text, args.out)
    if code == EXIT_OK and args.comparison:
        rep, _ = validation.calibration_report()
        records = rep.records()
        cols = list(records[0]) if records else []
        header = {"calibration_point": rep.calibration_point, "w0_mm": 4.25, "lambda_mm": 8.5, "theta_deg": 60.0}
        code = _emit(render_csv(records, cols, header), args.comparison)
    if code != EXIT_OK:
        return code
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="beamcoherence", description="Second-order coherence of beams split at a dielectric interface.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def output(sp, formats=("csv", "json"), default="csv"):
        sp.add_argument("--out", metavar="PATH", default=None, help="output file (default: stdout)")
        sp.add_argument("--format", choices=formats, default=default)

    f = sub.add_parser("fresnel", help="Fresnel coefficients and their angular derivatives")
    f.add_argument("--n", type=float, default=1.5, help="refractive index (default 1.5)")
    f.add_argument("--theta", default="0.1:89.9:500", help="degrees: VALUE or START:STOP:SAMPLES")
    output(f)

    g = sub.add_parser("g2", help="closed-form coherence components at a point or along one axis")
    g.add_argument("--n", type=float, default=1.5)
    g.add_argument("--theta", type=float, default=60.0, help="angle of incidence, degrees")
    g.add_argument("--dx", type=float, default=0.5, help="detector separation, mm")
    g.add_argument("--dy", type=float, default=0.0, help="detector separation, mm")
    g.add_argument("--dz", type=float, default=1.0, help="detector distance, mm")
    g.add_argument("--w0", type=float, default=14.0, help="beam waist, mm")
    g.add_argument("--lambda", dest="lam", type=float, default=8.5, help="wavelength, mm")
    g.add_argument("--delta-s", type=float, default=0.0, help="shift area moment (0 for a Gaussian)")
    g.add_argument("--delta-if", type=float, default=0.0, help="Imbert-Fedorov moment (0 for a Gaussian)")
    g.add_argument("--components", default="VVVV,VVHH,HVHV,HHVH")
    g.add_argument("--sweep", choices=sorted(AXES), help="quantity swept by --axis")
    g.add_argument("--axis", metavar="START:STOP:SAMPLES")
    output(g)

    fig = sub.add_parser("figure", help="data table for one reference figure")
    fig.add_argument("name", choices=figures.FIGURES)
    output(fig)

    v = sub.add_parser("validate", help="run the acceptance checks and oracle comparison")
    v.add_argument("--skip-slow", action="store_true", help="skip the figure reproducibility check")
    v.add_argument("--comparison", metavar="PATH", help="also write the oracle comparison records (CSV)")
    v.add_argument("--inject-fault", choices=sorted(FAULTS), help=argparse.SUPPRESS)
    output(v, formats=("text", "csv", "json"), default="text")
    return p


COMMANDS = {"fresnel": cmd_fresnel, "g2": cmd_g2, "figure": cmd_figure, "validate": cmd_validate}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
