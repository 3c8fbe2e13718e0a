"""Frenet and Bishop (type-1, type-2) frames along a sampled curve.

Frames are stored as 3x3 arrays whose rows are the frame vectors in order:

    frenet   (T, N, B)
    bishop1  (T, N1, N2)     N1' = -k1 T,  N2' = -k2 T
    bishop2  (Z1, Z2, B)     Z1' = -e1 B,  Z2' = -e2 B

Each kind satisfies F' = C(s) F with a skew "Cartan" matrix C built from its
curvatures, which is what the vector propagators integrate.

Two angles appear: ``theta1`` with theta1' = tau rotates the Frenet normal
plane onto (N1, N2); ``theta2`` with theta2' = kappa rotates (T, N) onto
(Z1, Z2). They are never interchangeable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import REGULARITY_TOL, SampledCurve
from .errors import FrameError, SingularityError
from .integrate import (
    cumulative_simpson,
    midpoint_values,
    orthonormalize,
    propagate_linear,
    rk4_step_matrices,
)

FRAME_KINDS = ("frenet", "bishop1", "bishop2")
INITIAL_FRAME_TOL = 1e-8


@dataclass(frozen=True)
class Frame:
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    kind: str

    def as_matrix(self):
        return np.stack([self.e1, self.e2, self.e3])


@dataclass(frozen=True)
class FramePath:
    s: np.ndarray
    frames: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in FRAME_KINDS:
            raise FrameError(f"unknown frame kind {self.kind!r}")
        if self.frames.shape != (len(self.s), 3, 3):
            raise FrameError(f"frames shape {self.frames.shape} does not match grid of {len(self.s)}")

    def __len__(self):
        return len(self.s)

    def __getitem__(self, i) -> Frame:
        f = self.frames[i]
        return Frame(f[0], f[1], f[2], self.kind)

    @property
    def e1(self):
        return self.frames[:, 0]

    @property
    def e2(self):
        return self.frames[:, 1]

    @property
    def e3(self):
        return self.frames[:, 2]


@dataclass(frozen=True)
class CurvatureProfile:
    s: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    eps1: np.ndarray
    eps2: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray

    @classmethod
    def from_frenet(cls, s, kappa, tau, theta1_0=0.0, theta2_0=0.0):
        h = float(s[1] - s[0])
        theta1 = theta1_profile(tau, theta1_0, h)
        theta2 = theta2_profile(kappa, theta2_0, h)
        return cls(s, kappa, tau, kappa * np.cos(theta1), kappa * np.sin(theta1),
                   -tau * np.cos(theta2), -tau * np.sin(theta2), theta1, theta2)


def orthonormality_defect(frames):
    """Per-frame max |F F^T - I| entry; rows are frame vectors."""
    frames = np.asarray(frames, dtype=float)
    gram = frames @ np.swapaxes(frames, -1, -2)
    return np.max(np.abs(gram - np.eye(3)), axis=(-1, -2))


def frame_deviation(a, b):
    """Per-sample max componentwise difference between two frame stacks."""
    return np.max(np.abs(np.asarray(a) - np.asarray(b)), axis=(-1, -2))


def step_rotation_angles(path: FramePath):
    """Rotation angle between consecutive frames."""
    rel = path.frames[1:] @ np.swapaxes(path.frames[:-1], -1, -2)
    cos = (np.trace(rel, axis1=-2, axis2=-1) - 1.0) / 2.0
    return np.arccos(np.clip(cos, -1.0, 1.0))


def _check_initial(frame):
    f = np.asarray(frame.as_matrix() if isinstance(frame, Frame) else frame, dtype=float)
    if f.shape != (3, 3):
        raise FrameError("initial frame must be 3x3")
    defect = orthonormality_defect(f)
    if defect > INITIAL_FRAME_TOL:
        raise FrameError(f"initial frame not orthonormal (defect {defect:.2e})")
    if np.linalg.det(f) <= 0:
        raise FrameError("initial frame is left-handed")
    return orthonormalize(f)


def _check_grid(s, *profiles):
    s = np.asarray(s, dtype=float)
    for p in profiles:
        if np.shape(p) != s.shape:
            raise FrameError(f"profile of length {np.shape(p)} does not match grid of {s.shape}")
    h = (s[-1] - s[0]) / (len(s) - 1)
    if h <= 0 or np.max(np.abs(np.diff(s) - h)) > 1e-6 * h:
        raise FrameError("grid is not uniform")
    return s, h


def cartan_frenet(kappa, tau):
    kappa, tau = np.asarray(kappa, float), np.asarray(tau, float)
    c = np.zeros(kappa.shape + (3, 3))
    c[..., 0, 1], c[..., 1, 0] = kappa, -kappa
    c[..., 1, 2], c[..., 2, 1] = tau, -tau
    return c


def cartan_bishop1(k1, k2):
    k1, k2 = np.asarray(k1, float), np.asarray(k2, float)
    c = np.zeros(k1.shape + (3, 3))
    c[..., 0, 1], c[..., 1, 0] = k1, -k1
    c[..., 0, 2], c[..., 2, 0] = k2, -k2
    return c


def cartan_bishop2(eps1, eps2):
    eps1, eps2 = np.asarray(eps1, float), np.asarray(eps2, float)
    c = np.zeros(eps1.shape + (3, 3))
    c[..., 0, 2], c[..., 2, 0] = -eps1, eps1
    c[..., 1, 2], c[..., 2, 1] = -eps2, eps2
    return c


def _propagate(cartan, s, p, q, initial, kind):
    s, h = _check_grid(s, p, q)
    f0 = _check_initial(initial)
    a_grid = cartan(p, q)
    a_mid = cartan(midpoint_values(p), midpoint_values(q))
    frames = propagate_linear(rk4_step_matrices(a_grid, a_mid, h), f0, project=orthonormalize)
    return FramePath(s, frames, kind)


def propagate_frenet(kappa, tau, initial, s) -> FramePath:
    """Integrate T' = kN, N' = -kT + tB, B' = -tN from ``initial`` (rows T, N, B)."""
    return _propagate(cartan_frenet, s, kappa, tau, initial, "frenet")


def propagate_bishop1(k1, k2, initial, s) -> FramePath:
    """Integrate the type-1 Bishop system from ``initial`` (rows T, N1, N2)."""
    return _propagate(cartan_bishop1, s, k1, k2, initial, "bishop1")


def propagate_bishop2(eps1, eps2, initial, s) -> FramePath:
    """Integrate the type-2 Bishop system from ``initial`` (rows Z1, Z2, B)."""
    return _propagate(cartan_bishop2, s, eps1, eps2, initial, "bishop2")


def frenet_apparatus(curve: SampledCurve, tol: float = REGULARITY_TOL):
    """Frenet frames, curvature and torsion from the curve derivatives.

    Raises :class:`SingularityError` at the first sample with curvature < tol.
    """
    t = curve.d1 / np.linalg.norm(curve.d1, axis=1, keepdims=True)
    normal = curve.d2 - np.sum(curve.d2 * t, axis=1, keepdims=True) * t
    kappa = np.linalg.norm(normal, axis=1)
    bad = np.flatnonzero(kappa < tol)
    if bad.size:
        raise SingularityError(bad[0], float(kappa[bad[0]]))
    n = normal / kappa[:, None]
    b = np.cross(t, n)
    cross = np.cross(curve.d1, curve.d2)
    tau = np.sum(cross * curve.d3, axis=1) / np.sum(cross * cross, axis=1)
    return FramePath(curve.s, np.stack([t, n, b], axis=1), "frenet"), kappa, tau


def theta1_profile(tau, theta1_0=0.0, h=None, s=None):
    """theta1(s) = theta1_0 + integral of tau; unwrapped."""
    if h is None:
        _, h = _check_grid(s, tau)
    return cumulative_simpson(tau, h, theta1_0)


def theta2_profile(kappa, theta2_0=0.0, h=None, s=None):
    """theta2(s) = theta2_0 + integral of kappa; unwrapped."""
    if h is None:
        _, h = _check_grid(s, kappa)
    return cumulative_simpson(kappa, h, theta2_0)


def bishop1_from_frenet(frenet: FramePath, kappa, tau, theta1):
    """Type-1 Bishop frames and curvatures from the Frenet frame and theta1."""
    if frenet.kind != "frenet":
        raise FrameError("expected a Frenet frame path")
    _check_grid(frenet.s, kappa, tau, theta1)
    c, sn = np.cos(theta1)[:, None], np.sin(theta1)[:, None]
    t, n, b = frenet.e1, frenet.e2, frenet.e3
    n1 = c * n - sn * b
    n2 = sn * n + c * b
    path = FramePath(frenet.s, np.stack([t, n1, n2], axis=1), "bishop1")
    return path, kappa * np.cos(theta1), kappa * np.sin(theta1)


def bishop2_from_frenet(frenet: FramePath, tau, theta2):
    """Type-2 Bishop frames and curvatures from the Frenet frame and theta2."""
    if frenet.kind != "frenet":
        raise FrameError("expected a Frenet frame path")
    _check_grid(frenet.s, tau, theta2)
    c, sn = np.cos(theta2)[:, None], np.sin(theta2)[:, None]
    t, n, b = frenet.e1, frenet.e2, frenet.e3
    z1 = sn * t + c * n
    z2 = -c * t + sn * n
    path = FramePath(frenet.s, np.stack([z1, z2, b], axis=1), "bishop2")
    return path, -tau * np.cos(theta2), -tau * np.sin(theta2)


def curvatures_from_bishop1(k1, k2, tol: float = REGULARITY_TOL):
    """kappa = |(k1, k2)| and the unwrapped angle theta1 = atan2(k2, k1).

    Where kappa < tol the angle is held at its previous value; leading flat
    samples take the first defined angle.
    """
    k1, k2 = np.atleast_1d(np.asarray(k1, float)), np.atleast_1d(np.asarray(k2, float))
    kappa = np.hypot(k1, k2)
    theta = np.zeros_like(kappa)
    valid = np.flatnonzero(kappa >= tol)
    if valid.size:
        unwrapped = np.unwrap(np.arctan2(k2[valid], k1[valid]))
        last = np.searchsorted(valid, np.arange(len(kappa)), side="right") - 1
        theta = unwrapped[np.maximum(last, 0)]
    return kappa, theta


def default_normal(tangent):
    """A unit vector orthogonal to ``tangent`` (Gram-Schmidt on the least aligned axis)."""
    t = np.asarray(tangent, float)
    axis = np.eye(3)[np.argmin(np.abs(t))]
    v = axis - np.dot(axis, t) * t
    return v / np.linalg.norm(v)


def initial_bishop1_frame(curve: SampledCurve, theta1_0=0.0, tol: float = REGULARITY_TOL):
    """Bishop-1 frame at s = 0: Frenet-based when curvature allows, otherwise
    an arbitrary normal rotated by theta1_0."""
    t = curve.d1[0] / np.linalg.norm(curve.d1[0])
    normal = curve.d2[0] - np.dot(curve.d2[0], t) * t
    kappa0 = np.linalg.norm(normal)
    n = normal / kappa0 if kappa0 >= tol else default_normal(t)
    b = np.cross(t, n)
    c, sn = np.cos(theta1_0), np.sin(theta1_0)
    n1 = c * n - sn * b
    return np.stack([t, n1, np.cross(t, n1)])


def bishop1_by_transport(curve: SampledCurve, initial=None, theta1_0=0.0):
    """Type-1 Bishop frames and curvatures without the Frenet frame.

    The frame is integrated with the curvatures read off the curve as
    k1 = <d2, N1>, k2 = <d2, N2> at every RK4 stage (d2 cubically
    interpolated at midpoints), so it stays defined through points where the
    curvature vanishes.
    """
    s, h = _check_grid(curve.s)
    f = _check_initial(initial_bishop1_frame(curve, theta1_0) if initial is None else initial)
    d2_grid = curve.d2
    d2_mid = midpoint_values(d2_grid)

    def rhs(frame, d2):
        return cartan_bishop1(frame[1] @ d2, frame[2] @ d2) @ frame

    frames = np.empty((len(s), 3, 3))
    frames[0] = f
    for i in range(len(s) - 1):
        k1 = rhs(f, d2_grid[i])
        k2 = rhs(f + 0.5 * h * k1, d2_mid[i])
        k3 = rhs(f + 0.5 * h * k2, d2_mid[i])
        k4 = rhs(f + h * k3, d2_grid[i + 1])
        f = orthonormalize(f + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4))
        frames[i + 1] = f
    k1 = np.sum(frames[:, 1] * d2_grid, axis=1)
    k2 = np.sum(frames[:, 2] * d2_grid, axis=1)
    return FramePath(s, frames, "bishop1"), k1, k2
