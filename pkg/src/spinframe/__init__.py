"""Frenet and Bishop frames along space curves, by vector and by spinor equations."""

__version__ = "0.1.0"

from .curves import (
    CurveSpec,
    SampledCurve,
    circle_spec,
    helix_spec,
    line_spec,
    load_curve_spec,
    sample_curve,
)
from .errors import CurveError, FrameError, SingularityError, SpinorError
from .frames import CurvatureProfile, Frame, FramePath, frenet_apparatus
from .pipeline import frame_field, frenet_routes, transport_routes
from .spinor_ode import PropagationConfig, SpinorPath, lift_frame_path, propagate_spinor
from .spinors import OrthoTriad, Spinor, mate, spinor_from_triad, triad_from_spinor
from .verify import ToleranceConfig, VerificationReport, cross_check_frames

__all__ = [
    "CurveSpec", "SampledCurve", "circle_spec", "helix_spec", "line_spec", "load_curve_spec", "sample_curve",
    "CurveError", "FrameError", "SingularityError", "SpinorError",
    "CurvatureProfile", "Frame", "FramePath", "frenet_apparatus",
    "frame_field", "frenet_routes", "transport_routes",
    "PropagationConfig", "SpinorPath", "lift_frame_path", "propagate_spinor",
    "OrthoTriad", "Spinor", "mate", "spinor_from_triad", "triad_from_spinor",
    "ToleranceConfig", "VerificationReport", "cross_check_frames",
]
