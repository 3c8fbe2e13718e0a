"""Spinor forms of the Frenet and Bishop equations, and frame lifts.

Each frame kind is carried by a single unit spinor whose triad lists the
frame vectors in a fixed order (see :data:`REP_ORDER`). The moving-frame
equations then collapse to

    frenet    psi'    = (-i tau psi + kappa mate(psi)) / 2
    bishop1   phi'    = (k1 + i k2) mate(phi) / 2
    bishop2   lambda' = (e1 + i e2) mate(lambda) / 2

These are real-linear (``mate`` is antilinear), so they are integrated as
4-dimensional real linear systems with the shared RK4 step matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FrameError, SpinorError
from .frames import FramePath, _check_grid, orthonormality_defect
from .integrate import midpoint_values, propagate_linear, rk4_step_matrices
from .spinors import mate, spinor_from_triad, spinor_norm, triad_from_spinor

# rep_kind -> (frame kind, frame rows forming the triad (a, b, c))
REP_ORDER = {
    "frenet_NBT": ("frenet", (1, 2, 0)),
    "bishop1_N1N2T": ("bishop1", (1, 2, 0)),
    "bishop2_Z1Z2B": ("bishop2", (0, 1, 2)),
    "frenet_TNB": ("frenet", (0, 1, 2)),
}
REP_FOR_EQUATION = {
    "frenet": "frenet_NBT",
    "bishop1": "bishop1_N1N2T",
    "bishop2": "bishop2_Z1Z2B",
    "bishop2_sum": "bishop2_Z1Z2B",
}
UNIT_TOL = 1e-9
LIFT_TOL = 1e-6


@dataclass(frozen=True)
class SpinorPath:
    s: np.ndarray
    spinors: np.ndarray
    rep_kind: str

    def __post_init__(self):
        if self.rep_kind not in REP_ORDER:
            raise SpinorError(f"unknown rep_kind {self.rep_kind!r}")
        if self.spinors.shape != (len(self.s), 2):
            raise SpinorError(f"spinors shape {self.spinors.shape} does not match grid of {len(self.s)}")

    def __len__(self):
        return len(self.s)

    def norm_defect(self):
        return np.abs(spinor_norm(self.spinors) - 1.0)

    def sign_jumps(self):
        """Indices i where psi[i] is closer to -psi[i-1] than to psi[i-1]."""
        a, b = self.spinors[1:], self.spinors[:-1]
        return np.flatnonzero(np.linalg.norm(a - b, axis=1) >= np.linalg.norm(a + b, axis=1)) + 1


@dataclass(frozen=True)
class PropagationConfig:
    step: float | None = None
    renormalize_every: int | None = 1
    method: str = "rk4"

    def __post_init__(self):
        if self.step is not None and self.step <= 0:
            raise ValueError("step must be positive")
        if self.renormalize_every is not None and self.renormalize_every < 1:
            raise ValueError("renormalize_every must be >= 1 (or None to disable)")
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")


def spinor_frenet_rhs(psi, kappa, tau):
    psi = np.asarray(psi, dtype=complex)
    return 0.5 * (-1j * tau * psi + kappa * mate(psi))


def spinor_bishop1_rhs(phi, k1, k2):
    return 0.5 * (k1 + 1j * k2) * mate(phi)


def spinor_bishop2_rhs(lam, eps1, eps2):
    return 0.5 * (eps1 + 1j * eps2) * mate(lam)


def _coefficients(kind, p, q):
    """(f, g) with psi' = f psi + g mate(psi)."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    if kind == "frenet":
        return -0.5j * q, 0.5 * p + 0j
    if kind in ("bishop1", "bishop2"):
        return np.zeros_like(p, dtype=complex), 0.5 * (p + 1j * q)
    if kind == "bishop2_sum":
        # real coefficient (e1 + e2)/2; wrong, kept only to show it is
        return np.zeros_like(p, dtype=complex), 0.5 * (p + q) + 0j
    raise ValueError(f"unknown spinor equation {kind!r}")


_MATE = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)


def _complex_mult(c):
    """4x4 real matrices multiplying both spinor components by c."""
    c = np.asarray(c, complex)
    m = np.zeros(c.shape + (4, 4))
    for k in (0, 2):
        m[..., k, k] = m[..., k + 1, k + 1] = c.real
        m[..., k, k + 1] = -c.imag
        m[..., k + 1, k] = c.imag
    return m


def _generator(kind, p, q):
    f, g = _coefficients(kind, p, q)
    return _complex_mult(f) + _complex_mult(g) @ _MATE


def to_real(psi):
    psi = np.asarray(psi, complex)
    return np.stack([psi[..., 0].real, psi[..., 0].imag, psi[..., 1].real, psi[..., 1].imag], axis=-1)


def from_real(r):
    r = np.asarray(r, float)
    return np.stack([r[..., 0] + 1j * r[..., 1], r[..., 2] + 1j * r[..., 3]], axis=-1)


def _unit(y):
    return y / np.sqrt(y @ y)


def propagate_spinor(kind, p, q, psi0, s, config: PropagationConfig | None = None) -> SpinorPath:
    """Integrate one of the spinor equations along the grid ``s``.

    ``kind`` is "frenet" (p, q = kappa, tau), "bishop1" (k1, k2) or
    "bishop2" (eps1, eps2). Curvatures at half-steps come from cubic
    interpolation of the grid samples.
    """
    config = config or PropagationConfig()
    s, h = _check_grid(s, p, q)
    p, q = np.asarray(p, float), np.asarray(q, float)
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
        raise SpinorError("curvature profile has non-finite values")
    psi0 = np.asarray(psi0, complex)
    if psi0.shape != (2,) or abs(spinor_norm(psi0) - 1.0) > UNIT_TOL:
        raise SpinorError("initial spinor must be a unit spinor")
    steps = rk4_step_matrices(_generator(kind, p, q),
                              _generator(kind, midpoint_values(p), midpoint_values(q)), h)
    y = propagate_linear(steps, to_real(psi0), project=_unit, every=config.renormalize_every)
    return SpinorPath(s, from_real(y), REP_FOR_EQUATION[kind])


def enforce_sign_continuity(spinors):
    """Flip samples so each is nearer to its predecessor than to its negation.

    Returns the continuous spinors and the number of flips applied.
    """
    spinors = np.array(spinors, dtype=complex)
    a, b = spinors[1:], spinors[:-1]
    step = np.where(np.linalg.norm(a - b, axis=1) > np.linalg.norm(a + b, axis=1), -1.0, 1.0)
    signs = np.concatenate([[1.0], np.cumprod(step)])
    flips = int(np.count_nonzero(step < 0))
    spinors *= signs[:, None]
    return spinors, flips


def lift_frame_path(path: FramePath, rep_kind: str, start=None) -> SpinorPath:
    """Continuous spinor path whose triads are the frames in ``rep_kind`` order.

    The first sample uses the canonical sign unless ``start`` (a spinor)
    is given, in which case the sign nearest to it is used.
    """
    if rep_kind not in REP_ORDER:
        raise SpinorError(f"unknown rep_kind {rep_kind!r}")
    frame_kind, order = REP_ORDER[rep_kind]
    if path.kind != frame_kind:
        raise FrameError(f"rep_kind {rep_kind} needs a {frame_kind} path, got {path.kind}")
    defect = orthonormality_defect(path.frames)
    if np.any(defect > LIFT_TOL):
        i = int(np.argmax(defect))
        raise FrameError(f"frame {i} is not orthonormal (defect {defect[i]:.2e})")
    triads = path.frames[:, order, :]
    spinors = spinor_from_triad((triads[:, 0], triads[:, 1], triads[:, 2]), tol=LIFT_TOL)
    if start is not None:
        start = np.asarray(start, complex)
        if np.linalg.norm(spinors[0] - start) > np.linalg.norm(spinors[0] + start):
            spinors[0] = -spinors[0]
    spinors, _ = enforce_sign_continuity(spinors)
    return SpinorPath(path.s, spinors, rep_kind)


def frames_from_spinor_path(path: SpinorPath) -> FramePath:
    """Frame path whose rows are the triad vectors put back in frame order."""
    frame_kind, order = REP_ORDER[path.rep_kind]
    tri = triad_from_spinor(path.spinors)
    abc = np.stack([tri.a, tri.b, tri.c], axis=1) / tri.magnitude[:, None, None]
    frames = np.empty_like(abc)
    frames[:, list(order)] = abc
    return FramePath(path.s, frames, frame_kind)


def initial_spinor(frame, rep_kind: str):
    """Canonical spinor of a single frame (rows in frame order)."""
    _, order = REP_ORDER[rep_kind]
    f = np.asarray(frame, float)
    return spinor_from_triad((f[order[0]], f[order[1]], f[order[2]]), tol=LIFT_TOL)
