"""Detector placement in the lab frame mapped into the reflected and transmitted beam frames.

The lab frame has the screen at distance ``dz`` from the interface, with the two
detectors separated by ``dy`` horizontally and ``dx`` vertically.  Each
outgoing beam travels at its own angle (``theta`` for the reflected beam,
``theta_t`` for the refracted one), so the same lab offsets correspond to
different transverse offsets and propagation distances in each beam frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .fresnel import _check_theta

__all__ = ["DegenerateFrameError", "DetectorGeometry", "FrameRatios", "reflected_frame", "transmitted_frame"]


class DegenerateFrameError(ValueError):
    pass


@dataclass(frozen=True)
class DetectorGeometry:
    """Lab-frame detector offsets, all in the same length unit (mm by convention)."""

    dx: float
    dy: float
    dz: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.dx, self.dy, self.dz)):
            raise ValueError("detector offsets must be finite")
        if self.dz <= 0:
            raise ValueError(f"screen distance dz must be positive, got {self.dz}")

    @classmethod
    def from_ratios(cls, dz: float, dx_over_dz: float, dy_over_dz: float) -> "DetectorGeometry":
        return cls(dx_over_dz * dz, dy_over_dz * dz, dz)


@dataclass(frozen=True)
class FrameRatios:
    x_over_z: float
    y_over_z: float
    z: float
    frame: Literal["reflected", "transmitted"]

    @property
    def squared_norm(self) -> float:
        return self.x_over_z**2 + self.y_over_z**2


def _frame(g: DetectorGeometry, angle: float, frame) -> FrameRatios:
    _check_theta(angle)
    s, c = math.sin(angle), math.cos(angle)
    z = g.dx * s + g.dz * c
    if z <= 0:
        raise DegenerateFrameError(f"beam-frame distance {z} <= 0 for {frame} frame")
    x = ((g.dx * math.tan(angle) + g.dz) * s - g.dx / c) / z
    return FrameRatios(x, g.dy / z, z, frame)


def reflected_frame(g: DetectorGeometry, theta: float) -> FrameRatios:
    return _frame(g, theta, "reflected")


def transmitted_frame(g: DetectorGeometry, theta_t: float) -> FrameRatios:
    return _frame(g, theta_t, "transmitted")
