"""First-order Jones matrices of the reflected and transmitted beams.

Each plane-wave component of a beam is labelled by its transverse momentum
relative to the central wavevector, ``(k_x/k, k_y/k)``.  Expanding the
rotations from the incident frame into the outgoing beam frames to first
order in these ratios gives 2x2 matrices in the (p, s) = (H, V) basis whose
off-diagonal entries couple the two polarisations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .fresnel import FresnelSet, InterfaceAngles, _check_theta

__all__ = [
    "PARAXIAL_LIMIT",
    "ParaxialWarning",
    "TransverseMomenta",
    "JonesMatrix",
    "jones_reflected",
    "jones_transmitted",
    "jones",
    "jones_array",
    "polarization_transfer",
]

PARAXIAL_LIMIT = 0.2

Kind = Literal["reflected", "transmitted"]


class ParaxialWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TransverseMomenta:
    kx_over_k: complex = 0.0
    ky_over_k: complex = 0.0

    def __post_init__(self):
        if max(abs(self.kx_over_k), abs(self.ky_over_k)) > PARAXIAL_LIMIT:
            warnings.warn(
                f"transverse momentum ratio beyond {PARAXIAL_LIMIT}; "
                "first-order Jones expansion may be inaccurate",
                ParaxialWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class JonesMatrix:
    elements: np.ndarray
    kind: Kind

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.elements, dtype=dtype)


def _require_derivatives(fres: FresnelSet) -> None:
    if not fres.has_derivatives:
        raise ValueError("FresnelSet lacks angular derivatives; use fresnel_derivatives()")


def jones_array(kind: Kind, fres: FresnelSet, angles: InterfaceAngles, kx, ky) -> np.ndarray:
    """Jones matrices on arrays of momentum ratios, shape ``broadcast(kx, ky) + (2, 2)``.

    Entries are polynomials in ``kx`` and ``ky``, so complex arguments are
    accepted and give the analytic continuation.
    """
    _check_theta(angles.theta)
    _require_derivatives(fres)
    kx, ky = np.broadcast_arrays(np.asarray(kx, dtype=complex), np.asarray(ky, dtype=complex))
    cot = 1.0 / math.tan(angles.theta)
    m = np.empty(kx.shape + (2, 2), dtype=complex)
    if kind == "reflected":
        off = (fres.r_p + fres.r_s) * cot * ky
        m[..., 0, 0] = fres.r_p + fres.dr_p * kx
        m[..., 0, 1] = off
        m[..., 1, 0] = -off
        m[..., 1, 1] = fres.r_s + fres.dr_s * kx
    elif kind == "transmitted":
        eta = angles.eta
        m[..., 0, 0] = fres.t_p + eta * fres.dt_p * kx
        m[..., 0, 1] = (fres.t_p - eta * fres.t_s) * cot * ky
        m[..., 1, 0] = (eta * fres.t_p - fres.t_s) * cot * ky
        m[..., 1, 1] = fres.t_s + eta * fres.dt_s * kx
    else:
        raise ValueError(f"unknown beam kind {kind!r}")
    return m


def jones_reflected(fres: FresnelSet, angles: InterfaceAngles, k: TransverseMomenta) -> JonesMatrix:
    return JonesMatrix(jones_array("reflected", fres, angles, k.kx_over_k, k.ky_over_k), "reflected")


def jones_transmitted(fres: FresnelSet, angles: InterfaceAngles, k: TransverseMomenta) -> JonesMatrix:
    return JonesMatrix(jones_array("transmitted", fres, angles, k.kx_over_k, k.ky_over_k), "transmitted")


def jones(kind: Kind, fres: FresnelSet, angles: InterfaceAngles, k: TransverseMomenta) -> JonesMatrix:
    if kind == "reflected":
        return jones_reflected(fres, angles, k)
    if kind == "transmitted":
        return jones_transmitted(fres, angles, k)
    raise ValueError(f"unknown beam kind {kind!r}")


def polarization_transfer(j: JonesMatrix) -> np.ndarray:
    """``J^dagger J``: the output polarisation matrix for an unpolarised input."""
    m = np.asarray(j.elements)
    return m.conj().T @ m
