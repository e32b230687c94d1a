"""Snell's law and Fresnel amplitude coefficients for a vacuum/dielectric interface.

Sign convention: at normal incidence ``r_p = (n - 1)/(n + 1)`` and
``r_s = -(n - 1)/(n + 1)``, so ``r_p + r_s -> 0`` as the incidence angle goes to
zero.  The cross-polarisation terms of the beam Jones matrices carry a
``cot(theta)`` factor and stay finite only under this convention.

All angles are in radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "InterfaceAngles",
    "FresnelSet",
    "snell",
    "fresnel_coefficients",
    "fresnel_derivatives",
    "brewster_angle",
    "interface",
]


class DomainError(ValueError):
    """Raised when an angle or refractive index lies outside the supported domain."""


@dataclass(frozen=True)
class InterfaceAngles:
    theta: float
    theta_t: float
    n: float
    eta: float


@dataclass(frozen=True)
class FresnelSet:
    r_p: float
    r_s: float
    t_p: float
    t_s: float
    dr_p: float = math.nan
    dr_s: float = math.nan
    dt_p: float = math.nan
    dt_s: float = math.nan

    @property
    def has_derivatives(self) -> bool:
        return not any(math.isnan(v) for v in (self.dr_p, self.dr_s, self.dt_p, self.dt_s))


def _check_theta(theta: float) -> None:
    if not (0.0 < theta < math.pi / 2):
        raise DomainError(f"incidence angle {theta!r} rad outside the open interval (0, pi/2)")


def _check_index(n: float) -> None:
    if not (n >= 1.0) or not math.isfinite(n):
        raise DomainError(f"refractive index {n!r} must be >= 1 (incidence from vacuum)")


def snell(theta: float, n: float = 1.5) -> InterfaceAngles:
    """Refraction angle and obliquity factor ``eta = cos(theta_t)/cos(theta)``."""
    _check_theta(theta)
    _check_index(n)
    theta_t = math.asin(math.sin(theta) / n)
    return InterfaceAngles(theta, theta_t, n, math.cos(theta_t) / math.cos(theta))


def _terms(angles: InterfaceAngles):
    n = angles.n
    c, s = math.cos(angles.theta), math.sin(angles.theta)
    ct = math.cos(angles.theta_t)
    # d(theta_t)/d(theta) = cos(theta) / (n cos(theta_t))
    dct = -math.sin(angles.theta_t) * c / (n * ct)
    return n, c, s, ct, dct


def fresnel_coefficients(angles: InterfaceAngles) -> FresnelSet:
    n, c, _, ct, _ = _terms(angles)
    dp = n * c + ct
    ds = c + n * ct
    return FresnelSet(
        r_p=(n * c - ct) / dp,
        r_s=(c - n * ct) / ds,
        t_p=2.0 * c / dp,
        t_s=2.0 * c / ds,
    )


def fresnel_derivatives(angles: InterfaceAngles) -> FresnelSet:
    """Coefficients together with their analytic derivatives in the incidence angle."""
    n, c, s, ct, dct = _terms(angles)
    dp, ddp = n * c + ct, -n * s + dct
    ds, dds = c + n * ct, -s + n * dct
    base = fresnel_coefficients(angles)
    return FresnelSet(
        r_p=base.r_p,
        r_s=base.r_s,
        t_p=base.t_p,
        t_s=base.t_s,
        dr_p=((-n * s - dct) * dp - (n * c - ct) * ddp) / dp**2,
        dr_s=((-s - n * dct) * ds - (c - n * ct) * dds) / ds**2,
        dt_p=(-2.0 * s * dp - 2.0 * c * ddp) / dp**2,
        dt_s=(-2.0 * s * ds - 2.0 * c * dds) / ds**2,
    )


def brewster_angle(n: float = 1.5) -> float:
    _check_index(n)
    return math.atan(n)


def interface(theta: float, n: float = 1.5) -> tuple[InterfaceAngles, FresnelSet]:
    """Shorthand for ``snell`` followed by ``fresnel_derivatives``."""
    angles = snell(theta, n)
    return angles, fresnel_derivatives(angles)
