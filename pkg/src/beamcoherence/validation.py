"""Acceptance checks and the oracle calibration report.

Every check returns a :class:`Check` with the measured quantity and the
threshold it was held to; ``run_all`` drives them for ``beamcoherence
validate`` and the test suite uses the same functions one by one.
"""

from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from . import figures
from .coherence import Axis, ComponentLabel, Setup, evaluate, g2_component, reflected_hh_coherence, sweep
from .fresnel import FresnelSet, InterfaceAngles, brewster_angle, fresnel_derivatives, snell
from .moments import BeamParams, gaussian_intensity, intensity_moments
from .oracle import (
    CalibrationError,
    ComparisonReport,
    FourPointCorrelation,
    normalize_and_compare,
    oracle_point,
    propagate_two_point,
    sign_changes,
)

__all__ = ["Check", "CHECKS", "run_all", "format_report", "faulty_rs_sign", "calibration_report", "calibration_info"]

FresnelFn = Callable[[InterfaceAngles], FresnelSet]

# rounding allowance for "non-increasing" on values near 1 (a few ulp)
MONOTONE_SLACK = 1e-15


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: str
    threshold: str
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{self.name} {status} measured={self.measured} threshold={self.threshold}"
        return out + (f" | {self.detail}" if self.detail else "")


def faulty_rs_sign(angles: InterfaceAngles) -> FresnelSet:
    """Fault-injection hook: flips the sign of the ``n cos(theta_t)`` term in the r_s numerator."""
    f = fresnel_derivatives(angles)
    c, ct, n = math.cos(angles.theta), math.cos(angles.theta_t), angles.n
    return replace(f, r_s=(c + n * ct) / (c + n * ct))


def _energy_residual(fres: FresnelSet, angles: InterfaceAngles) -> float:
    ratio = angles.n * math.cos(angles.theta_t) / math.cos(angles.theta)
    return max(abs(fres.r_s**2 + ratio * fres.t_s**2 - 1.0), abs(fres.r_p**2 + ratio * fres.t_p**2 - 1.0))


def check_a1(fresnel_fn: FresnelFn = fresnel_derivatives) -> Check:
    start = time.perf_counter()
    n = 1.5
    tb = brewster_angle(n)
    rp_b = abs(fresnel_fn(snell(tb, n)).r_p)
    rows = figures.fresnel_table(np.linspace(0.1, 89.9, 500), n, fresnel_fn)
    below = [r["r_p"] for r in rows if r["theta_deg"] < math.degrees(tb)]
    above = [r["r_p"] for r in rows if r["theta_deg"] > math.degrees(tb)]
    flips = all(v > 0 for v in below) and all(v < 0 for v in above)
    elapsed = time.perf_counter() - start
    ok = rp_b < 1e-12 and flips and elapsed < 1.0
    return Check(
        "A1", ok, f"|r_p(theta_B)|={rp_b:.3e},sign_change={flips},runtime={elapsed:.3f}s", "<1e-12,True,<1s"
    )


def check_a2(fresnel_fn: FresnelFn = fresnel_derivatives) -> Check:
    grid = np.linspace(0.0, math.pi / 2, 10_002)[1:-1]
    worst = 0.0
    for th in grid:
        a = snell(float(th), 1.5)
        worst = max(worst, _energy_residual(fresnel_fn(a), a))
    return Check("A2", worst < 1e-12, f"{worst:.3e}", "<1e-12", f"{grid.size} angles, both polarizations")


def _fig2_curves(reading: str) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    rows = sweep(figures.ALL, Axis(reading, *figures.FIG2_AXIS), figures.FIG2_BASE)
    out: dict[str, tuple[list, list]] = {}
    for r in rows:
        xs, ys = out.setdefault(str(r.component), ([], []))
        xs.append(r.coords[0][1])
        ys.append(math.nan if r.result is None else r.result.magnitude)
    return {k: (np.array(x), np.array(y)) for k, (x, y) in out.items()}


def check_a3() -> Check:
    start = time.perf_counter()
    parts = []
    any_pass = False
    for reading in ("dy_over_dx", "dy_over_dz"):
        curves = _fig2_curves(reading)
        ok_reading = True
        for comp in ("VVVV", "VVHH"):
            x, y = curves[comp]
            at0 = y[0]
            at2 = y[np.argmin(abs(x - 2.0))]
            rise = float(np.max(np.diff(y)))
            plateau = 1.8 <= at0 <= 2.0
            tail = abs(at2 - 1.0) <= 0.05
            mono = rise <= MONOTONE_SLACK
            ok_reading &= plateau and tail and mono
            parts.append(f"{reading}:{comp}:g(0)={at0:.12g},g(2)={at2:.12g},max_rise={rise:.3e}")
        any_pass |= ok_reading
    elapsed = time.perf_counter() - start
    ok = any_pass and elapsed < 5.0
    return Check(
        "A3", ok, "; ".join(parts) + f"; runtime={elapsed:.2f}s",
        "g(0) in [1.8,2.0], |g(2)-1|<=0.05, non-increasing, <5s (either axis reading)",
    )


def check_a4() -> Check:
    worst = max(evaluate(lab, figures.FIG2_BASE).magnitude for lab in ("HVHV", "HHVH"))
    return Check("A4", worst < 1e-10, f"{worst:.3e}", "<1e-10", "Delta_Y=0, Gaussian beam")


def check_a5() -> Check:
    worst = 0.0
    for reading in ("dy_over_dx", "dy_over_dz"):
        curves = _fig2_curves(reading)
        for comp in ("HVHV", "HHVH"):
            worst = max(worst, float(np.nanmax(curves[comp][1])))
    return Check("A5", worst < 1.0, f"max={worst:.3e}", "<1", "HVHV and HHVH over the fig2 sweep")


def _hhvh_numerator(deg: float) -> float:
    setup = figures.FIG3_BASE.with_axis("theta", deg)
    return evaluate("HHVH", setup, strict=False).numerator.real


def _hh_numerator(deg: float) -> float:
    setup = figures.FIG3_BASE.with_axis("theta", deg)
    angles, fres = setup.interface()
    fr, _ = setup.frames()
    return reflected_hh_coherence(fres, angles, fr).numerator


def check_a6() -> Check:
    tb = math.degrees(brewster_angle(1.5))
    z_hhvh = sign_changes(_hhvh_numerator, 40.0, 70.0, xtol=1e-6)
    z_hh = sign_changes(_hh_numerator, 40.0, 70.0, xtol=1e-6)
    brackets = len(z_hhvh) == 2 and z_hhvh[0] < tb < z_hhvh[1]
    offsets = [min(abs(a - b) for b in z_hh) for a in z_hhvh] if z_hh else [math.inf]
    ok = brackets and max(offsets) <= 0.1
    return Check(
        "A6", ok,
        f"HHVH zeros={[round(z, 4) for z in z_hhvh]},HH zeros={[round(z, 4) for z in z_hh]},max_offset={max(offsets):.2e}",
        "exactly 2 bracketing 56.31 deg, offsets<=0.1 deg",
    )


def check_a7() -> Check:
    rows = figures.fig3b_rows()
    ok = True
    parts = []
    for comp in ("VVVV", "VVHH"):
        pts = [(r["theta_deg"], r["value"]) for r in rows if r["quantity"] == comp]
        small = [v for t, v in pts if t <= 20.0]
        large = [v for t, v in pts if t > 20.0 and math.isfinite(v)]
        dev = max(abs(v - 1.0) for v in small)
        peak = max(large)
        ok &= dev <= 0.02 and peak > 1.05
        parts.append(f"{comp}:max|g-1|(<=20deg)={dev:.3e},max g(>20deg)={peak:.12g}")
    return Check("A7", ok, "; ".join(parts), "|g-1|<=0.02 for theta<=20, some g>1.05 beyond")


def check_a8(seed: int = 20240601) -> Check:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        setup = Setup(
            theta=math.radians(rng.uniform(5.0, 85.0)),
            dz=rng.uniform(1.0, 1000.0),
            dx_over_dz=rng.uniform(0.0, 1.0),
            dy_over_dz=rng.uniform(-1.0, 1.0),
            beam=BeamParams(w0=rng.uniform(1.0, 30.0), lam=rng.uniform(0.5, 20.0)),
        )
        for lab in ComponentLabel:
            ref = evaluate(lab, setup).value
            for c in (0.5, 2.0, 10.0):
                scaled = replace(setup, beam=BeamParams(w0=c * setup.beam.w0, lam=c * setup.beam.lam))
                v = evaluate(lab, scaled).value
                rel = abs(v - ref) / abs(ref) if ref != 0 else abs(v)
                worst = max(worst, rel)
    rows = figures.fig4_rows()
    rise = 0.0
    for lam in figures.FIG4_LAMBDAS:
        for dz in sorted({r["dz_mm"] for r in rows}):
            ys = [r["magnitude_vvvv"] for r in rows if r["dz_mm"] == dz and r["lambda_mm"] == lam]
            rise = max(rise, float(np.max(np.diff(ys))))
    ok = worst <= 1e-12 and rise <= MONOTONE_SLACK
    return Check(
        "A8", ok, f"scale_law_rel={worst:.3e},max_rise_in_w0/lambda={rise:.3e}",
        "<=1e-12, non-increasing",
    )


def _parity(plus: complex, minus: complex, tol: float = 1e-9) -> str:
    scale = max(abs(plus), abs(minus))
    if scale == 0:
        return "zero"
    if abs(plus - minus) <= tol * scale:
        return "even"
    if abs(plus + minus) <= tol * scale:
        return "odd"
    return "none"


def _varying(res) -> complex:
    # value minus its constant, kept at full precision below 1 ulp of the constant
    return res.geometric_prefactor * res.envelope


def _fig2_points(base: Setup = figures.FIG2_BASE):
    return [base.with_axis("dy_over_dx", float(v)) for v in Axis("dy_over_dx", *figures.FIG2_AXIS).values()]


def check_a9() -> Check:
    points = _fig2_points()
    closed, orc = [], []
    for s in points:
        angles, fres = s.interface()
        closed.append({lab: g2_component(lab, fres, angles, s.geometry, s.beam) for lab in ComponentLabel})
        orc.append(oracle_point(s.beam, fres, angles, s.geometry))

    env_c = np.array([c[ComponentLabel.VVVV].envelope for c in closed])
    env_o = np.array([o.envelope for o in orc])
    env_dev = float(np.max(np.abs((env_o / env_o[0]) / (env_c / env_c[0]) - 1.0)))

    mismatches = 0
    for s in points[1:]:
        flipped = replace(s, dy_over_dz=-s.dy_over_dz)
        a1, f1 = s.interface()
        o_p = oracle_point(s.beam, f1, a1, s.geometry)
        o_m = oracle_point(s.beam, f1, a1, flipped.geometry)
        for lab in ComponentLabel:
            cp, cm = evaluate(lab, s), evaluate(lab, flipped)
            pc = _parity(_varying(cp), _varying(cm))
            po = _parity(o_p.normalized_cross(lab), o_m.normalized_cross(lab))
            mismatches += pc != po

    qualifying = [i for i, e in enumerate(env_c) if e > 1e-3]
    if qualifying:
        try:
            rep = normalize_and_compare(orc, closed, qualifying[0])
            cal_dev = rep.max_deviation(min_envelope=1e-3)
            cal_text = f"calibrated_dev={cal_dev:.3e} over {len(qualifying)} points"
        except CalibrationError as exc:
            cal_dev, cal_text = math.inf, f"calibration failed: {exc}"
    else:
        cal_dev = 0.0
        cal_text = f"0 of {len(points)} points have envelope>1e-3 (max {env_c.max():.3e}); condition vacuous"

    quad = 0.0
    for s in points[::20]:
        angles, fres = s.interface()
        a = oracle_point(s.beam, fres, angles, s.geometry, nodes=16).cross
        b = oracle_point(s.beam, fres, angles, s.geometry, nodes=32).cross
        quad = max(quad, float(np.max(np.abs(a - b)) / np.max(np.abs(b))))

    ok = env_dev <= 1e-6 and mismatches == 0 and cal_dev < 1e-3 and quad < 1e-12
    return Check(
        "A9", ok,
        f"envelope_ratio_dev={env_dev:.3e},parity_mismatches={mismatches},{cal_text},quadrature_doubling={quad:.3e}",
        "<=1e-6,0,<1e-3,<1e-12",
    )


def check_a10() -> Check:
    beam = BeamParams()
    dy, ds = intensity_moments(lambda x, y: gaussian_intensity(x, y, beam), beam.w0)
    worst = 0.0
    h = 1e-6
    for deg in np.linspace(1.0, 89.0, 177):
        th = math.radians(deg)
        f = fresnel_derivatives(snell(th, 1.5))
        fp = fresnel_derivatives(snell(th + h, 1.5))
        fm = fresnel_derivatives(snell(th - h, 1.5))
        for name in ("r_p", "r_s", "t_p", "t_s"):
            fd = (getattr(fp, name) - getattr(fm, name)) / (2 * h)
            exact = getattr(f, "d" + name)
            worst = max(worst, abs(fd - exact) / abs(exact))
    ok = abs(dy) <= 1e-12 and abs(ds) <= 1e-12 and worst < 1e-6
    return Check("A10", ok, f"delta_y={dy:.1e},delta_s={ds:.1e},fd_rel={worst:.3e}", "<=1e-12,<=1e-12,<1e-6")


def check_a11() -> Check:
    from .cli import main

    outputs = []
    elapsed = []
    with tempfile.TemporaryDirectory() as tmp:
        for run in range(2):
            t0 = time.perf_counter()
            files = []
            for fig in figures.FIGURES:
                path = Path(tmp) / f"{fig}_{run}.csv"
                code = main(["figure", fig, "--out", str(path)])
                if code != 0:
                    return Check("A11", False, f"exit {code} for {fig}", "exit 0")
                files.append(path.read_bytes())
            elapsed.append(time.perf_counter() - t0)
            outputs.append(files)
    identical = outputs[0] == outputs[1]
    ok = identical and max(elapsed) < 60.0
    return Check("A11", ok, f"runtime={max(elapsed):.2f}s,identical={identical}", "<60s,True")


CHECKS = {
    "A1": check_a1,
    "A2": check_a2,
    "A3": check_a3,
    "A4": check_a4,
    "A5": check_a5,
    "A6": check_a6,
    "A7": check_a7,
    "A8": check_a8,
    "A9": check_a9,
    "A10": check_a10,
    "A11": check_a11,
}


def run_all(fresnel_fn: FresnelFn = fresnel_derivatives, include_slow: bool = True) -> list[Check]:
    results = []
    for name, fn in CHECKS.items():
        if name == "A11" and not include_slow:
            continue
        results.append(fn(fresnel_fn) if name in ("A1", "A2") else fn())
    return results


def calibration_report() -> tuple[ComparisonReport, FourPointCorrelation]:
    """Closed form against oracle in the fig2 geometry at w0/lambda = 0.5.

    At the reference beam size no fig2 point has an envelope above 1e-3,
    so calibration is done on a smaller beam where the envelope is appreciable.
    """
    base = replace(figures.FIG2_BASE, beam=BeamParams(w0=4.25, lam=8.5))
    points = [base.with_axis("dy_over_dx", float(v)) for v in np.linspace(0.05, 2.0, 40)]
    closed, orc = [], []
    for s in points:
        angles, fres = s.interface()
        closed.append({lab: g2_component(lab, fres, angles, s.geometry, s.beam) for lab in ComponentLabel})
        orc.append(oracle_point(s.beam, fres, angles, s.geometry))
    return normalize_and_compare(orc, closed, 0), orc[0]


def calibration_info() -> list[str]:
    """INFO lines for the validation report; these carry no pass/fail."""
    rep, o0 = calibration_report()
    lines = []
    for lab in ComponentLabel:
        lines.append(
            f"INFO calibration {lab}: constant={rep.constants[str(lab)]:.6g} "
            f"max_rel_dev={rep.max_deviation(str(lab)):.3e} flags={','.join(rep.flags[str(lab)]) or '-'} "
            "(w0/lambda=0.5, theta=60, dx/dz=0.5)"
        )
    lines.append(
        "INFO oracle unit constants: "
        + ", ".join(f"{lab}={o0.normalized_constant(lab).real:.12g}" for lab in ("VVVV", "VVHH", "HVHV", "HHVH"))
    )
    z_closed = sign_changes(_hh_numerator, 40.0, 70.0, xtol=1e-6)

    def oracle_hh(deg, part):
        s = figures.FIG3_BASE.with_axis("theta", deg)
        a, f = s.interface()
        j = propagate_two_point(s.beam, f, a, "reflected", s.geometry)
        return getattr(complex(j.matrix[0, 0] / abs(j.coincident[0, 0])), part)

    z_re = sign_changes(lambda d: oracle_hh(d, "real"), 40.0, 70.0, samples=301, xtol=1e-6)
    z_im = sign_changes(lambda d: oracle_hh(d, "imag"), 40.0, 70.0, samples=301, xtol=1e-6)
    lines.append(
        f"INFO reflected HH zeros in (40,70) deg: closed={[round(z, 3) for z in z_closed]} "
        f"oracle_real={[round(z, 3) for z in z_re]} oracle_imag={[round(z, 3) for z in z_im]}"
    )
    return lines


def format_report(checks: list[Check], info: list[str] = ()) -> str:
    lines = [c.line() for c in checks]
    lines.extend(info)
    passed = sum(c.passed for c in checks)
    lines.append(f"SUMMARY {passed}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n"
