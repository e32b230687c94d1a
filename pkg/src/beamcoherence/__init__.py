"""Second-order coherence of thermal Gaussian beams reflected and refracted at a dielectric interface."""

from .coherence import (
    Axis,
    ComponentLabel,
    CorrelationResult,
    Setup,
    envelope,
    evaluate,
    g2_component,
    reflected_hh_coherence,
    sweep,
)
from .fresnel import brewster_angle, fresnel_coefficients, fresnel_derivatives, interface, snell
from .geometry import DetectorGeometry, reflected_frame, transmitted_frame
from .moments import BeamParams

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "BeamParams",
    "ComponentLabel",
    "CorrelationResult",
    "DetectorGeometry",
    "Setup",
    "brewster_angle",
    "envelope",
    "evaluate",
    "fresnel_coefficients",
    "fresnel_derivatives",
    "g2_component",
    "interface",
    "reflected_frame",
    "reflected_hh_coherence",
    "snell",
    "sweep",
    "transmitted_frame",
]
