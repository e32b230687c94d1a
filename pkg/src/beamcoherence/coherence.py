"""Closed-form second-order coherence of the reflected/transmitted beam pair.

Four post-selected components are available, labelled by the polarisations of
the four field operators: HVHV, VVHH, VVVV and HHVH.  Each one is a geometric
prefactor (built from Fresnel coefficients and detector-frame ratios) times a
Gaussian envelope, plus a constant: ``+1`` from photon indistinguishability
for VVHH and VVVV, and an aberration term (zero for a fundamental Gaussian)
for HVHV and HHVH.

The expressions are evaluated term for term in closed form, including the
``pi`` factors inside the squared brackets of VVHH, VVVV and HHVH and the
``r_s r_s`` normalisation of VVHH.  They are *not* algebraically simplified;
:mod:`beamcoherence.oracle` checks them numerically.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .fresnel import FresnelSet, InterfaceAngles, interface
from .geometry import DetectorGeometry, FrameRatios, reflected_frame, transmitted_frame
from .moments import BeamParams

__all__ = [
    "ComponentLabel",
    "CorrelationResult",
    "HHCoherence",
    "SingularCoefficientError",
    "Setup",
    "Axis",
    "SweepRow",
    "AXES",
    "SINGULAR_TOL",
    "SUB_POISSONIAN_MARGIN",
    "envelope",
    "g2_component",
    "evaluate",
    "reflected_hh_coherence",
    "sweep",
]

SINGULAR_TOL = 1e-14
SUB_POISSONIAN_MARGIN = 1e-9
PI = math.pi


class ComponentLabel(str, enum.Enum):
    HVHV = "HVHV"
    VVHH = "VVHH"
    VVVV = "VVVV"
    HHVH = "HHVH"

    def __str__(self) -> str:
        return self.value


class SingularCoefficientError(ZeroDivisionError):
    """A Fresnel coefficient in a denominator vanishes (e.g. ``r_p`` at Brewster's angle)."""


@dataclass(frozen=True)
class CorrelationResult:
    component: ComponentLabel
    value: complex
    envelope: float
    geometric_prefactor: complex
    aberration_term: complex
    constant: complex
    numerator: complex
    denominator: float
    flags: tuple[str, ...] = ()

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    @property
    def singular(self) -> bool:
        return "singular" in self.flags

    @property
    def sub_poissonian(self) -> bool:
        return "sub_poissonian" in self.flags


class HHCoherence(NamedTuple):
    value: float
    numerator: float
    denominator: float


def envelope(beam: BeamParams, fr: FrameRatios, ft: FrameRatios) -> float:
    """Shared Gaussian factor; depends on the beam only through ``w0 k0``."""
    return math.exp(-0.5 * beam.w0k0**2 * (fr.squared_norm + ft.squared_norm))


def _reflected_hh_bracket(fres: FresnelSet, cot: float, fr: FrameRatios) -> float:
    x, y = fr.x_over_z, fr.y_over_z
    return (x * fres.dr_p + PI * fres.r_p) ** 2 - (cot * y * PI * (fres.r_p + fres.r_s)) ** 2


def reflected_hh_coherence(fres: FresnelSet, angles: InterfaceAngles, fr: FrameRatios) -> HHCoherence:
    """Reflected-beam HH factor of the HHVH component.

    ``value`` is ``nan`` where ``r_p`` vanishes; ``numerator`` stays finite
    there, so use it to locate zeros.
    """
    num = _reflected_hh_bracket(fres, 1.0 / math.tan(angles.theta), fr)
    den = 2.0 * PI**2 * fres.r_p**2
    value = num / den if abs(fres.r_p) >= SINGULAR_TOL else math.nan
    return HHCoherence(value, num, den)


def _aberration(fres, angles, beam, cross_t):
    # shared Delta_S / Delta_IF term of HVHV and HHVH; cross_t is (t_p - eta t_s) or (t_s - eta t_p)
    if beam.is_gaussian:
        return 0j
    cot2 = 1.0 / math.tan(angles.theta) ** 2
    k0, w0, lam = beam.k0, beam.w0, beam.lam
    rsum, tsum = fres.r_p + fres.r_s, fres.t_p + fres.t_s
    left = (fres.dr_p + fres.dr_s) * beam.delta_s - 1j * k0 * rsum * w0**2 * beam.delta_if
    right = (fres.dt_p + fres.dt_s) * angles.eta * beam.delta_s + 1j * k0 * tsum * w0**2 * beam.delta_if
    num = lam**4 * cot2 * rsum * cross_t * left * right
    return num / (4.0 * PI**2 * w0**4 * fres.r_p * fres.r_s * fres.t_p * fres.t_s)


def _terms(label, fres, angles, fr, ft, beam):
    """(numerator, denominator, coefficients in the denominator, constant) for one component."""
    cot = 1.0 / math.tan(angles.theta)
    eta = angles.eta
    x, y, xt, yt = fr.x_over_z, fr.y_over_z, ft.x_over_z, ft.y_over_z
    rp, rs, tp, ts = fres.r_p, fres.r_s, fres.t_p, fres.t_s
    if label is ComponentLabel.HVHV:
        num = (
            -(cot**2) * y * (rp + rs) * (x * (fres.dr_p + fres.dr_s) + rp + rs)
            * yt * (tp - eta * ts) * (-xt * (fres.dt_p + fres.dt_s) + tp + ts)
        )
        den = rp * rs * tp * ts
        const = lambda: _aberration(fres, angles, beam, tp - eta * ts)  # noqa: E731
        return num, den, (rp, rs, tp, ts), const
    if label is ComponentLabel.HHVH:
        hh = _reflected_hh_bracket(fres, cot, fr)
        num = hh * yt * (ts - eta * tp) * (xt * (fres.dt_p + fres.dt_s) - tp - ts)
        den = 2.0 * PI**2 * rp * rp * tp * ts
        const = lambda: _aberration(fres, angles, beam, ts - eta * tp)  # noqa: E731
        return num, den, (rp, rs, tp, ts), const
    hh = _reflected_hh_bracket(fres, cot, fr)
    cross = (cot * PI * yt) ** 2 * (ts - eta * tp) * (eta * ts - tp)
    if label is ComponentLabel.VVHH:
        num = hh * (cross - (PI * ts - PI * xt * eta * fres.dt_s) ** 2)
        den = 2.0 * PI**2 * rs * rs * 2.0 * PI**2 * tp * tp
        return num, den, (rs, tp), lambda: 1.0 + 0j
    if label is ComponentLabel.VVVV:
        num = hh * (cross - (PI * tp - PI * xt * eta * fres.dt_p) ** 2)
        den = 2.0 * PI**2 * rs * rs * 2.0 * PI**2 * ts * ts
        return num, den, (rs, ts), lambda: 1.0 + 0j
    raise ValueError(f"unknown component {label!r}")


def g2_component(
    label: ComponentLabel | str,
    fres: FresnelSet,
    angles: InterfaceAngles,
    geom: DetectorGeometry,
    beam: BeamParams,
    *,
    strict: bool = True,
) -> CorrelationResult:
    """Evaluate one closed-form component at a single parameter point.

    With ``strict=False`` a vanishing Fresnel coefficient in a denominator
    yields a result flagged ``"singular"`` with ``value = nan`` (numerator
    still populated) instead of raising :class:`SingularCoefficientError`.
    """
    label = ComponentLabel(label)
    if not fres.has_derivatives:
        raise ValueError("FresnelSet lacks angular derivatives; use fresnel_derivatives()")
    fr = reflected_frame(geom, angles.theta)
    ft = transmitted_frame(geom, angles.theta_t)
    env = envelope(beam, fr, ft)
    num, den, coeffs, const_fn = _terms(label, fres, angles, fr, ft, beam)
    if min(abs(c) for c in coeffs) < SINGULAR_TOL:
        if strict:
            raise SingularCoefficientError(f"{label}: Fresnel coefficient below {SINGULAR_TOL} in denominator")
        nan = complex(math.nan, math.nan)
        return CorrelationResult(label, nan, env, nan, nan, nan, complex(num), den, ("singular",))
    prefactor = complex(num / den)
    const = complex(const_fn())
    aberration = const if label in (ComponentLabel.HVHV, ComponentLabel.HHVH) else 0j
    value = prefactor * env + const
    flags = ("sub_poissonian",) if abs(value) < 1.0 - SUB_POISSONIAN_MARGIN else ()
    return CorrelationResult(label, value, env, prefactor, aberration, const, complex(num), den, flags)


@dataclass(frozen=True)
class Setup:
    """One full parameter point: interface, detector geometry and beam.

    Geometry is held as ``dz`` plus the two lab ratios so that figure sweeps
    can vary one quantity while the others stay fixed.
    """

    theta: float = math.radians(60.0)
    n: float = 1.5
    dz: float = 1.0
    dx_over_dz: float = 0.5
    dy_over_dz: float = 0.0
    beam: BeamParams = field(default_factory=BeamParams)

    @property
    def geometry(self) -> DetectorGeometry:
        return DetectorGeometry.from_ratios(self.dz, self.dx_over_dz, self.dy_over_dz)

    def interface(self) -> tuple[InterfaceAngles, FresnelSet]:
        return interface(self.theta, self.n)

    def frames(self) -> tuple[FrameRatios, FrameRatios]:
        angles, _ = self.interface()
        g = self.geometry
        return reflected_frame(g, angles.theta), transmitted_frame(g, angles.theta_t)

    def with_axis(self, name: str, value: float) -> "Setup":
        if name == "theta":
            return replace(self, theta=math.radians(value))
        if name == "dy_over_dx":
            return replace(self, dy_over_dz=value * self.dx_over_dz)
        if name == "dy_over_dz":
            return replace(self, dy_over_dz=value)
        if name == "dx_over_dz":
            return replace(self, dx_over_dz=value)
        if name == "dz":
            return replace(self, dz=value)
        if name == "w0_over_lambda":
            return replace(self, beam=replace(self.beam, w0=value * self.beam.lam))
        raise ValueError(f"unknown sweep axis {name!r}; expected one of {sorted(AXES)}")


# axis name -> unit of the axis value as presented to users
AXES = {
    "theta": "deg",
    "dy_over_dx": "1",
    "dy_over_dz": "1",
    "dx_over_dz": "1",
    "dz": "mm",
    "w0_over_lambda": "1",
}


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    samples: int

    def __post_init__(self):
        if self.name not in AXES:
            raise ValueError(f"unknown sweep axis {self.name!r}; expected one of {sorted(AXES)}")
        if self.samples < 2:
            raise ValueError(f"axis {self.name} needs at least 2 samples, got {self.samples}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError(f"axis {self.name} bounds must be finite")

    def values(self) -> np.ndarray:
        return np.sort(np.linspace(self.start, self.stop, self.samples))


def evaluate(label: ComponentLabel | str, setup: Setup, *, strict: bool = True) -> CorrelationResult:
    angles, fres = setup.interface()
    return g2_component(label, fres, angles, setup.geometry, setup.beam, strict=strict)


@dataclass(frozen=True)
class SweepRow:
    coords: tuple[tuple[str, float], ...]
    component: ComponentLabel
    result: CorrelationResult | None
    error: str | None = None

    @property
    def flags(self) -> tuple[str, ...]:
        if self.result is None:
            return ("error",)
        return self.result.flags

    def as_record(self) -> dict:
        rec = dict(self.coords)
        rec["component"] = str(self.component)
        if self.result is None:
            rec.update(real=math.nan, imag=math.nan, magnitude=math.nan, envelope=math.nan)
        else:
            v = self.result.value
            rec.update(real=v.real, imag=v.imag, magnitude=abs(v), envelope=self.result.envelope)
        rec["flags"] = ";".join(self.flags)
        return rec


def sweep(
    labels: Iterable[ComponentLabel | str],
    axes: Axis | Sequence[Axis],
    base: Setup = Setup(),
) -> list[SweepRow]:
    """Evaluate components on the Cartesian product of the axes.

    Rows are ordered by axis value (first axis slowest), then by component in
    the order given.  A point that cannot be evaluated (say, a degenerate
    detector frame) becomes a row with ``result=None`` and an ``error`` message;
    a vanishing Fresnel denominator gives a ``"singular"`` row instead.
    """
    labels = [ComponentLabel(lab) for lab in labels]
    axes = [axes] if isinstance(axes, Axis) else list(axes)
    rows: list[SweepRow] = []
    for combo in itertools.product(*(ax.values() for ax in axes)):
        coords = tuple((ax.name, float(v)) for ax, v in zip(axes, combo))
        try:
            setup = base
            for name, v in coords:
                setup = setup.with_axis(name, v)
            angles, fres = setup.interface()
            geom = setup.geometry
        except ValueError as exc:
            rows.extend(SweepRow(coords, lab, None, str(exc)) for lab in labels)
            continue
        for lab in labels:
            try:
                res = g2_component(lab, fres, angles, geom, setup.beam, strict=False)
                rows.append(SweepRow(coords, lab, res))
            except (ValueError, ArithmeticError) as exc:
                rows.append(SweepRow(coords, lab, None, str(exc)))
    return rows
