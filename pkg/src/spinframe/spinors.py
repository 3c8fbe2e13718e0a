"""Two-component spinors and the oriented orthogonal triads they encode.

A spinor psi = (psi1, psi2) determines the triad {a, b, c} through

    a + i b = psi^T sigma psi,      c = -mate(psi)^T sigma psi,

with the complex symmetric matrices in :data:`SIGMA`. The triad has equal
norms |psi1|^2 + |psi2|^2, is right-handed, and psi and -psi give the same
triad.

Functions take array-likes of shape (..., 2) (complex) and broadcast over
leading axes; :class:`Spinor` is a convenience wrapper for single values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpinorError

SIGMA = np.array(
    [
        [[1, 0], [0, -1]],
        [[1j, 0], [0, 1j]],
        [[0, -1], [-1, 0]],
    ],
    dtype=complex,
)
SIGMA.setflags(write=False)

TRIAD_TOL = 1e-6
_SIGN_EPS = 1e-12


@dataclass(frozen=True)
class Spinor:
    psi1: complex
    psi2: complex

    def __post_init__(self):
        if not (np.isfinite(self.psi1) and np.isfinite(self.psi2)):
            raise SpinorError("spinor components must be finite")

    def __array__(self, dtype=None, copy=None):
        return np.array([self.psi1, self.psi2], dtype=dtype or complex)

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=complex)
        return cls(complex(arr[0]), complex(arr[1]))


@dataclass(frozen=True)
class OrthoTriad:
    """Mutually orthogonal vectors a, b, c of common length ``magnitude``.

    Fields may carry leading batch axes, e.g. (n, 3) for n triads.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    magnitude: np.ndarray | float

    def as_matrix(self):
        """Rows a, b, c."""
        return np.stack([self.a, self.b, self.c], axis=-2)

    def defect(self):
        """Worst orthogonality / norm / orientation violation, relative to magnitude."""
        m = np.asarray(self.magnitude, dtype=float)
        safe = np.where(m > 0, m, 1.0)
        dots = np.stack([_dot(self.a, self.b), _dot(self.b, self.c), _dot(self.a, self.c)], axis=-1)
        norms = np.stack([np.linalg.norm(v, axis=-1) for v in (self.a, self.b, self.c)], axis=-1)
        ortho = np.max(np.abs(dots), axis=-1) / safe**2
        scale = np.max(np.abs(norms - m[..., None]), axis=-1) / safe
        return np.maximum(ortho, scale)


def _dot(u, v):
    return np.sum(u * v, axis=-1)


def _as_spinor(psi):
    arr = np.asarray(psi, dtype=complex)
    if arr.shape[-1:] != (2,):
        raise SpinorError(f"spinor arrays need a trailing axis of length 2, got {arr.shape}")
    return arr


def bilinear_sigma(phi, psi):
    """(phi^T sigma_1 psi, phi^T sigma_2 psi, phi^T sigma_3 psi); symmetric in its arguments."""
    phi, psi = _as_spinor(phi), _as_spinor(psi)
    return np.einsum("...i,kij,...j->...k", phi, SIGMA, psi)


def mate(psi):
    """(psi1, psi2) -> (-conj(psi2), conj(psi1)). Antilinear; mate(mate(psi)) = -psi."""
    psi = _as_spinor(psi)
    return np.stack([-np.conj(psi[..., 1]), np.conj(psi[..., 0])], axis=-1)


def spinor_norm(psi):
    psi = _as_spinor(psi)
    return np.sum(np.abs(psi) ** 2, axis=-1)


def phase_rotate(psi, angle):
    """Multiply by exp(i angle / 2), which turns a + ib by exp(i angle)."""
    psi = _as_spinor(psi)
    return psi * np.exp(0.5j * np.asarray(angle, dtype=float))[..., None]


def isotropic_vector(psi):
    """m = a + ib = psi^T sigma psi."""
    return bilinear_sigma(psi, psi)


def third_vector(psi):
    """c = -mate(psi)^T sigma psi (real up to rounding)."""
    return -bilinear_sigma(mate(psi), psi).real


def triad_from_spinor(psi) -> OrthoTriad:
    psi = _as_spinor(psi)
    norm = spinor_norm(psi)
    if np.any(norm == 0):
        raise SpinorError("zero spinor has no triad")
    p1, p2 = psi[..., 0], psi[..., 1]
    m = np.stack([p1**2 - p2**2, 1j * (p1**2 + p2**2), -2 * p1 * p2], axis=-1)
    cross = p1 * np.conj(p2)
    c = np.stack([2 * cross.real, -2 * cross.imag, np.abs(p1) ** 2 - np.abs(p2) ** 2], axis=-1)
    return OrthoTriad(m.real, m.imag, c, norm)


def canonical_sign(psi):
    """Pick the representative of +-psi whose first non-negligible entry of
    (Re psi1, Im psi1, Re psi2, Im psi2) is positive."""
    psi = _as_spinor(psi)
    parts = np.stack([psi[..., 0].real, psi[..., 0].imag, psi[..., 1].real, psi[..., 1].imag], axis=-1)
    eps = _SIGN_EPS * np.sqrt(spinor_norm(psi))[..., None]
    significant = np.abs(parts) > eps
    first = np.argmax(significant, axis=-1)
    lead = np.take_along_axis(parts, first[..., None], axis=-1)[..., 0]
    sign = np.where(lead < 0, -1.0, 1.0)
    return psi * sign[..., None]


def spinor_from_triad(triad, tol: float = TRIAD_TOL):
    """Inverse of :func:`triad_from_spinor`, canonical sign.

    ``triad`` is an :class:`OrthoTriad` or a sequence (a, b, c). Triads within
    ``tol`` (relative) of orthonormal-times-magnitude are projected to the
    nearest exact one first; worse triads, and left-handed ones, are rejected.
    """
    if isinstance(triad, OrthoTriad):
        a, b, c = (np.asarray(v, dtype=float) for v in (triad.a, triad.b, triad.c))
    else:
        a, b, c = (np.asarray(v, dtype=float) for v in triad)
    frame = np.stack([a, b, c], axis=-2)
    if not np.all(np.isfinite(frame)):
        raise SpinorError("triad has non-finite entries")
    norms = np.linalg.norm(frame, axis=-1)
    mag = norms.mean(axis=-1)
    if np.any(mag == 0):
        raise SpinorError("zero triad")
    if np.any(np.abs(norms - mag[..., None]) > tol * mag[..., None]):
        raise SpinorError("triad vectors have mismatched norms")
    dots = np.stack([_dot(a, b), _dot(b, c), _dot(a, c)], axis=-1)
    if np.any(np.abs(dots) > tol * mag[..., None] ** 2):
        raise SpinorError("triad vectors are not orthogonal")
    if np.any(np.linalg.det(frame) <= 0):
        raise SpinorError("triad is left-handed (det(a, b, c) <= 0)")

    unit = frame / mag[..., None, None]
    u, _, vt = np.linalg.svd(unit)
    unit = u @ vt
    a, b = unit[..., 0, :] * mag[..., None], unit[..., 1, :] * mag[..., None]

    m = a + 1j * b
    sq1 = 0.5 * (m[..., 0] - 1j * m[..., 1])
    sq2 = 0.5 * (-m[..., 0] - 1j * m[..., 1])
    first = np.abs(sq1) >= np.abs(sq2)
    root1 = np.sqrt(sq1)
    root2 = np.sqrt(sq2)
    with np.errstate(divide="ignore", invalid="ignore"):
        psi1 = np.where(first, root1, -m[..., 2] / (2 * root2))
        psi2 = np.where(first, -m[..., 2] / (2 * root1), root2)
    return canonical_sign(np.stack([psi1, psi2], axis=-1))
