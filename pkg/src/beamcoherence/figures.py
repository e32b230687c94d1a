"""Data tables for the four reference figures.

Parameters for the interface (n = 1.5), detector ratios and beam
(w0 = 14 mm, lambda = 8.5 mm) are fixed at their reference values; only the
sampling grids below are our choice.
"""

from __future__ import annotations

import math
from dataclasses import replace

from .coherence import Axis, ComponentLabel, Setup, reflected_hh_coherence, sweep
from .fresnel import fresnel_derivatives, snell
from .moments import BeamParams

__all__ = [
    "FIGURES",
    "COLUMNS",
    "FIG2_BASE",
    "FIG3_BASE",
    "FIG4_BASE",
    "FIG2_AXIS",
    "FIG3_THETA",
    "FIG4_DZ",
    "FIG4_W0_OVER_LAMBDA",
    "FIG4_LAMBDAS",
    "fresnel_table",
    "figure_rows",
    "figure_header",
]

ALL = [ComponentLabel.VVVV, ComponentLabel.VVHH, ComponentLabel.HVHV, ComponentLabel.HHVH]

FIG2_BASE = Setup(theta=math.radians(60.0), dx_over_dz=0.5, dy_over_dz=0.0)
FIG3_BASE = Setup(dx_over_dz=0.5, dy_over_dz=0.5)
FIG4_BASE = Setup(theta=math.radians(60.0), dx_over_dz=0.5, dy_over_dz=0.5)

FIG2_AXIS = (0.0, 2.0, 201)
FIG3_THETA = (0.1, 89.9, 899)
FIG4_DZ = (10.0, 1000.0, 12)
FIG4_W0_OVER_LAMBDA = (0.1, 3.0, 30)
# two wavelengths per grid point so the w0/lambda-only dependence is visible in the data
FIG4_LAMBDAS = (8.5, 1.0)

FIGURES = ("fig2", "fig3a", "fig3b", "fig4")

COLUMNS = {
    "fresnel": ["theta_deg", "r_p", "r_s", "t_p", "t_s", "dr_p", "dr_s", "dt_p", "dt_s"],
    "fig2": ["reading", "axis", "dy_over_dx", "dy_over_dz", "component", "magnitude", "envelope"],
    "fig3a": ["theta_deg", "component", "magnitude"],
    "fig3b": ["theta_deg", "quantity", "value"],
    "fig4": ["dz_mm", "w0_over_lambda", "w0_mm", "lambda_mm", "magnitude_vvvv"],
}


def fresnel_table(theta_deg, n: float = 1.5, fresnel_fn=fresnel_derivatives) -> list[dict]:
    rows = []
    for deg in theta_deg:
        f = fresnel_fn(snell(math.radians(deg), n))
        rows.append(
            dict(
                theta_deg=float(deg), r_p=f.r_p, r_s=f.r_s, t_p=f.t_p, t_s=f.t_s,
                dr_p=f.dr_p, dr_s=f.dr_s, dt_p=f.dt_p, dt_s=f.dt_s,
            )
        )
    return rows


def _magnitude(row) -> float:
    return math.nan if row.result is None else row.result.magnitude


def fig2_rows(base: Setup = FIG2_BASE, axis=FIG2_AXIS) -> list[dict]:
    """Both readings of the horizontal axis, ``dy/dx`` and ``dy/dz``."""
    out = []
    for reading in ("dy_over_dx", "dy_over_dz"):
        for row in sweep(ALL, Axis(reading, *axis), base):
            v = dict(row.coords)[reading]
            dy_dz = v * base.dx_over_dz if reading == "dy_over_dx" else v
            out.append(
                dict(
                    reading=reading,
                    axis=v,
                    dy_over_dx=dy_dz / base.dx_over_dz,
                    dy_over_dz=dy_dz,
                    component=str(row.component),
                    magnitude=_magnitude(row),
                    envelope=math.nan if row.result is None else row.result.envelope,
                )
            )
    return out


def fig3a_rows(base: Setup = FIG3_BASE, theta=FIG3_THETA) -> list[dict]:
    return [
        dict(theta_deg=dict(r.coords)["theta"], component=str(r.component), magnitude=_magnitude(r))
        for r in sweep(ALL, Axis("theta", *theta), base)
    ]


def fig3b_rows(base: Setup = FIG3_BASE, theta=FIG3_THETA) -> list[dict]:
    out = []
    for deg in Axis("theta", *theta).values():
        setup = base.with_axis("theta", float(deg))
        angles, fres = setup.interface()
        fr, _ = setup.frames()
        hh = reflected_hh_coherence(fres, angles, fr)
        out.append(dict(theta_deg=float(deg), quantity="g_out_HH", value=hh.value))
        out.append(dict(theta_deg=float(deg), quantity="g_out_HH_numerator", value=hh.numerator))
    for r in sweep([ComponentLabel.VVVV, ComponentLabel.VVHH], Axis("theta", *theta), base):
        out.append(dict(theta_deg=dict(r.coords)["theta"], quantity=str(r.component), value=_magnitude(r)))
    out.sort(key=lambda d: (d["theta_deg"], ["g_out_HH", "g_out_HH_numerator", "VVVV", "VVHH"].index(d["quantity"])))
    return out


def fig4_rows(base: Setup = FIG4_BASE, dz=FIG4_DZ, ratio=FIG4_W0_OVER_LAMBDA, lambdas=FIG4_LAMBDAS) -> list[dict]:
    out = []
    for lam in lambdas:
        b = replace(base, beam=BeamParams(w0=base.beam.w0, lam=lam))
        for r in sweep([ComponentLabel.VVVV], [Axis("dz", *dz), Axis("w0_over_lambda", *ratio)], b):
            c = dict(r.coords)
            out.append(
                dict(
                    dz_mm=c["dz"],
                    w0_over_lambda=c["w0_over_lambda"],
                    w0_mm=c["w0_over_lambda"] * lam,
                    lambda_mm=lam,
                    magnitude_vvvv=_magnitude(r),
                )
            )
    out.sort(key=lambda d: (d["dz_mm"], d["w0_over_lambda"], -d["lambda_mm"]))
    return out


def figure_rows(name: str) -> list[dict]:
    try:
        fn = {"fig2": fig2_rows, "fig3a": fig3a_rows, "fig3b": fig3b_rows, "fig4": fig4_rows}[name]
    except KeyError:
        raise ValueError(f"unknown figure {name!r}; expected one of {FIGURES}") from None
    return fn()


def figure_header(name: str) -> dict:
    h = {"figure": name, "n": 1.5, "w0_mm": 14.0, "lambda_mm": 8.5}
    if name == "fig2":
        h.update(theta_deg=60.0, dx_over_dz=0.5, axis=f"{FIG2_AXIS[0]}:{FIG2_AXIS[1]}:{FIG2_AXIS[2]}")
    elif name in ("fig3a", "fig3b"):
        h.update(dx_over_dz=0.5, dy_over_dz=0.5, theta=f"{FIG3_THETA[0]}:{FIG3_THETA[1]}:{FIG3_THETA[2]}")
    else:
        del h["w0_mm"], h["lambda_mm"]
        h.update(
            theta_deg=60.0, dx_over_dz=0.5, dy_over_dz=0.5,
            dz=f"{FIG4_DZ[0]}:{FIG4_DZ[1]}:{FIG4_DZ[2]}",
            w0_over_lambda=f"{FIG4_W0_OVER_LAMBDA[0]}:{FIG4_W0_OVER_LAMBDA[1]}:{FIG4_W0_OVER_LAMBDA[2]}",
            lambdas_mm=",".join(format(v, "g") for v in FIG4_LAMBDAS),
        )
    return h
