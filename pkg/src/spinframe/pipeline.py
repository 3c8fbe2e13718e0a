"""Run all framing routes on one curve.

The closed-form route reads frames off the curve derivatives; the vector
route integrates the frame equations; the spinor route integrates the
single-spinor equations and converts back to triads. Initial conditions for
the integrated routes are taken from the closed-form frames at s = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import REGULARITY_TOL, SampledCurve, check_regularity
from .errors import SingularityError
from .frames import (
    CurvatureProfile,
    FramePath,
    bishop1_by_transport,
    bishop1_from_frenet,
    bishop2_from_frenet,
    curvatures_from_bishop1,
    frenet_apparatus,
    propagate_bishop1,
    propagate_bishop2,
    propagate_frenet,
)
from .spinor_ode import (
    PropagationConfig,
    SpinorPath,
    frames_from_spinor_path,
    initial_spinor,
    lift_frame_path,
    propagate_spinor,
)
from .spinors import phase_rotate

METHODS = ("closed-form", "vector", "spinor")


@dataclass(frozen=True)
class FrenetRoutes:
    """Every route for a curve whose Frenet frame exists everywhere."""

    curve: SampledCurve
    profile: CurvatureProfile
    closed: dict[str, FramePath]
    vector: dict[str, FramePath]
    spinor: dict[str, SpinorPath]
    lifted: dict[str, SpinorPath]


@dataclass(frozen=True)
class TransportRoutes:
    """Type-1 Bishop routes that never touch the Frenet frame."""

    curve: SampledCurve
    transported: FramePath
    k1: np.ndarray
    k2: np.ndarray
    vector: FramePath
    spinor: SpinorPath


def frenet_routes(curve: SampledCurve, theta1_0=0.0, theta2_0=0.0,
                  config: PropagationConfig | None = None) -> FrenetRoutes:
    frenet, kappa, tau = frenet_apparatus(curve)
    prof = CurvatureProfile.from_frenet(curve.s, kappa, tau, theta1_0, theta2_0)
    b1, _, _ = bishop1_from_frenet(frenet, kappa, tau, prof.theta1)
    b2, _, _ = bishop2_from_frenet(frenet, tau, prof.theta2)
    s = curve.s
    vector = {
        "frenet": propagate_frenet(kappa, tau, frenet.frames[0], s),
        "bishop1": propagate_bishop1(prof.k1, prof.k2, b1.frames[0], s),
        "bishop2": propagate_bishop2(prof.eps1, prof.eps2, b2.frames[0], s),
    }
    lifted = {
        "frenet_NBT": lift_frame_path(frenet, "frenet_NBT"),
        "frenet_TNB": lift_frame_path(frenet, "frenet_TNB"),
    }
    # seeds aligned so the phase relations hold with the plain theta profiles
    psi0 = lifted["frenet_NBT"].spinors[0]
    phi0 = phase_rotate(psi0, prof.theta1[0])
    lam0 = phase_rotate(lifted["frenet_TNB"].spinors[0], prof.theta2[0] - np.pi / 2)
    spinor = {
        "frenet": propagate_spinor("frenet", kappa, tau, psi0, s, config),
        "bishop1": propagate_spinor("bishop1", prof.k1, prof.k2, phi0, s, config),
        "bishop2": propagate_spinor("bishop2", prof.eps1, prof.eps2, lam0, s, config),
    }
    lifted["bishop1_N1N2T"] = lift_frame_path(b1, "bishop1_N1N2T", start=phi0)
    lifted["bishop2_Z1Z2B"] = lift_frame_path(b2, "bishop2_Z1Z2B", start=lam0)
    closed = {"frenet": frenet, "bishop1": b1, "bishop2": b2}
    return FrenetRoutes(curve, prof, closed, vector, spinor, lifted)


def transport_routes(curve: SampledCurve, theta1_0=0.0,
                     config: PropagationConfig | None = None) -> TransportRoutes:
    transported, k1, k2 = bishop1_by_transport(curve, theta1_0=theta1_0)
    f0 = transported.frames[0]
    vector = propagate_bishop1(k1, k2, f0, curve.s)
    spinor = propagate_spinor("bishop1", k1, k2, initial_spinor(f0, "bishop1_N1N2T"), curve.s, config)
    return TransportRoutes(curve, transported, k1, k2, vector, spinor)


def frame_field(curve: SampledCurve, kind: str, method: str, theta0: float = 0.0):
    """Frames of one kind by one method, plus the matching curvature columns.

    Returns (FramePath, {column name: values}). Type-1 Bishop frames fall back
    to the Frenet-free transport route when the curve has flat points;
    Frenet and type-2 frames raise :class:`SingularityError` there.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    flat = check_regularity(curve, REGULARITY_TOL)
    if flat.any() and kind == "bishop1":
        routes = transport_routes(curve, theta1_0=theta0)
        _, theta1 = curvatures_from_bishop1(routes.k1, routes.k2)
        cols = {"k1": routes.k1, "k2": routes.k2, "theta1": theta1}
        path = {"closed-form": routes.transported, "vector": routes.vector,
                "spinor": frames_from_spinor_path(routes.spinor)}[method]
        return path, cols
    if flat.any():
        raise SingularityError(int(np.argmax(flat)))

    frenet, kappa, tau = frenet_apparatus(curve)
    prof = CurvatureProfile.from_frenet(
        curve.s, kappa, tau,
        theta1_0=theta0 if kind == "bishop1" else 0.0,
        theta2_0=theta0 if kind == "bishop2" else 0.0,
    )
    s = curve.s
    if kind == "frenet":
        cols = {"kappa": kappa, "tau": tau}
        if method == "closed-form":
            return frenet, cols
        if method == "vector":
            return propagate_frenet(kappa, tau, frenet.frames[0], s), cols
        psi0 = initial_spinor(frenet.frames[0], "frenet_NBT")
        return frames_from_spinor_path(propagate_spinor("frenet", kappa, tau, psi0, s)), cols
    if kind == "bishop1":
        b1, k1, k2 = bishop1_from_frenet(frenet, kappa, tau, prof.theta1)
        cols = {"k1": k1, "k2": k2, "theta1": prof.theta1}
        if method == "closed-form":
            return b1, cols
        if method == "vector":
            return propagate_bishop1(k1, k2, b1.frames[0], s), cols
        phi0 = initial_spinor(b1.frames[0], "bishop1_N1N2T")
        return frames_from_spinor_path(propagate_spinor("bishop1", k1, k2, phi0, s)), cols
    if kind == "bishop2":
        b2, e1, e2 = bishop2_from_frenet(frenet, tau, prof.theta2)
        cols = {"eps1": e1, "eps2": e2, "theta2": prof.theta2}
        if method == "closed-form":
            return b2, cols
        if method == "vector":
            return propagate_bishop2(e1, e2, b2.frames[0], s), cols
        lam0 = initial_spinor(b2.frames[0], "bishop2_Z1Z2B")
        return frames_from_spinor_path(propagate_spinor("bishop2", e1, e2, lam0, s)), cols
    raise ValueError(f"unknown frame kind {kind!r}")
