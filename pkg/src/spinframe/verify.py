"""Numerical checks of the frame/spinor correspondences.

Every check produces a :class:`CheckRecord` holding the worst residual over
the grid, the tolerance it was held to, and the sample where the worst
residual occurred. Checks that cannot run (Frenet frame singular, curve not
closed) are recorded as skipped, never as passed.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .curves import REGULARITY_TOL, SampledCurve, check_regularity
from .errors import CurveError, FrameError, SpinorError
from .frames import (
    FramePath,
    bishop1_by_transport,
    curvatures_from_bishop1,
    frame_deviation,
    frenet_apparatus,
    orthonormality_defect,
    step_rotation_angles,
)
from .pipeline import frenet_routes, transport_routes
from .spinor_ode import SpinorPath, frames_from_spinor_path, lift_frame_path
from .spinors import (
    bilinear_sigma,
    isotropic_vector,
    mate,
    spinor_from_triad,
    spinor_norm,
    third_vector,
    triad_from_spinor,
)

TOL_ENV = "SPINFRAME_TOL"

CHECKS = {
    "algebra.isotropy": "m.m = 0 for m = a + ib, relative to |psi|^4",
    "algebra.norm_equality": "|a| = |b| = |c| = spinor norm, relative",
    "algebra.orientation": "<a x b, c> = |psi|^6 > 0, relative",
    "algebra.bilinear_symmetry": "phi^T sigma psi = psi^T sigma phi",
    "algebra.mate_conjugation": "conj(phi^T sigma psi) = -mate(phi)^T sigma mate(psi)",
    "algebra.mate_antilinearity": "mate(x phi + y psi) = conj(x) mate(phi) + conj(y) mate(psi)",
    "algebra.mate_involution": "mate(mate(psi)) = -psi",
    "algebra.linear_independence": "det[psi, mate(psi)] = spinor norm",
    "algebra.round_trip": "spinor_from_triad(triad_from_spinor(psi)) = +-psi for unit psi",
    "frenet.orthonormality": "closed-form Frenet frames orthonormal",
    "frenet.vector_vs_closed_form": "integrated Frenet equations vs closed-form frames",
    "frenet.spinor_vs_closed_form": "spinor Frenet equation triads {N,B,T} vs closed-form frames",
    "frenet.lift_vs_spinor": "lifted Frenet spinor path vs integrated spinor path",
    "bishop1.orthonormality": "closed-form type-1 Bishop frames orthonormal",
    "bishop1.vector_vs_closed_form": "integrated type-1 equations vs closed-form frames",
    "bishop1.spinor_vs_closed_form": "type-1 spinor equation triads {N1,N2,T} vs closed-form frames",
    "bishop1.spinor_vs_vector": "type-1 spinor route vs vector route",
    "bishop1.transport_vs_closed_form": "Frenet-free transported frames vs closed-form frames",
    "bishop2.orthonormality": "closed-form type-2 Bishop frames orthonormal",
    "bishop2.vector_vs_closed_form": "integrated type-2 equations vs closed-form frames",
    "bishop2.spinor_vs_closed_form": "type-2 spinor equation triads {Z1,Z2,B} vs closed-form frames",
    "bishop2.spinor_vs_vector": "type-2 spinor route vs vector route",
    "profile.kappa_from_bishop1": "kappa = sqrt(k1^2 + k2^2)",
    "profile.theta1_from_bishop1": "atan2(k2, k1) recovers theta1 up to a constant multiple of 2 pi",
    "profile.frenet_from_bishop1": "N, B rebuilt from N1, N2, theta1",
    "profile.frenet_from_bishop2": "T, N rebuilt from Z1, Z2, theta2",
    "profile.bishop2_angle_rate": "(e2/e1)' / (1 + (e2/e1)^2) = kappa by finite differences",
    "spinor.unit_norm": "all integrated and lifted spinors have unit norm",
    "theorem2": "phi^T sigma phi = exp(i theta1) psi^T sigma psi and equal tangents",
    "theorem2.half_angle": "phi = +-exp(i theta1 / 2) psi",
    "theorem4": "lambda^T sigma lambda = -i exp(i theta2) psi'^T sigma psi' and equal binormals",
    "double_cover.frenet": "lifted Frenet spinor after one pass over a closed curve",
    "double_cover.bishop1": "lifted type-1 Bishop spinor after one pass over a closed curve",
    "transport.orthonormality": "Frenet-free type-1 frames orthonormal",
    "transport.vector_vs_transport": "type-1 vector route vs transported frames",
    "transport.spinor_vs_vector": "type-1 spinor route vs vector route (Frenet-free curvatures)",
    "transport.step_rotation": "per-step rotation <= h max|(k1, k2)| (+1e-6)",
}


@dataclass(frozen=True)
class ToleranceConfig:
    algebraic_tol: float = 1e-12
    ode_tol: float = 1e-6
    theorem_tol: float = 1e-6
    frame_tol: float = 1e-9
    fd_tol: float = 1e-5

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value >= 0:
                raise ValueError(f"{name} must be nonnegative")

    @classmethod
    def with_tol(cls, tol: float | None = None):
        """Defaults, with ode/theorem tolerance from ``tol`` or $SPINFRAME_TOL."""
        if tol is None and os.environ.get(TOL_ENV):
            tol = float(os.environ[TOL_ENV])
        if tol is None:
            return cls()
        return cls(ode_tol=tol, theorem_tol=tol)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    max_residual: float | None
    tolerance: float
    passed: bool | None
    worst_index: int | None = None
    note: str = ""

    @property
    def status(self) -> str:
        return "skipped" if self.passed is None else ("pass" if self.passed else "fail")

    def to_dict(self):
        d = asdict(self)
        d["status"] = self.status
        return d


@dataclass
class VerificationReport:
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def add(self, record: CheckRecord):
        if record.name not in CHECKS:
            raise KeyError(f"undocumented check {record.name!r}")
        self.checks.append(record)

    def __getitem__(self, name) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self):
        return [c.name for c in self.checks]

    def to_dict(self):
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def residual_record(name, residuals, tol, note="") -> CheckRecord:
    r = np.atleast_1d(np.asarray(residuals, dtype=float))
    if r.size == 0:
        return skipped(name, tol, "no samples")
    if np.any(~np.isfinite(r)):
        i = int(np.flatnonzero(~np.isfinite(r))[0])
        return CheckRecord(name, float("inf"), tol, False, i, note)
    i = int(np.argmax(r))
    worst = float(r[i])
    return CheckRecord(name, worst, tol, worst <= tol, i, note)


def skipped(name, tol, reason) -> CheckRecord:
    return CheckRecord(name, None, tol, None, None, reason)


def check_orthonormality(path: FramePath, tol: float, name: str = "frenet.orthonormality") -> CheckRecord:
    """Orthonormality and handedness; a left-handed frame counts as residual 1."""
    defect = orthonormality_defect(path.frames)
    defect = np.where(np.linalg.det(path.frames) > 0, defect, np.maximum(defect, 1.0))
    return residual_record(name, defect, tol)


def check_frames_agree(name, a: FramePath, b: FramePath, tol) -> CheckRecord:
    if a.kind != b.kind or len(a) != len(b):
        raise FrameError(f"{name}: cannot compare {a.kind}[{len(a)}] with {b.kind}[{len(b)}]")
    return residual_record(name, frame_deviation(a.frames, b.frames), tol)


def _same_grid(*paths):
    s0 = paths[0].s
    for p in paths[1:]:
        if len(p.s) != len(s0) or np.max(np.abs(p.s - s0)) > 1e-12 * max(1.0, abs(s0[-1])):
            raise FrameError("paths are on different grids")


def check_theorem2(phi: SpinorPath, psi: SpinorPath, theta1, tol: float = 1e-6) -> CheckRecord:
    """Type-1 Bishop spinor vs Frenet {N,B,T} spinor: quadratic forms differ
    by exp(i theta1), third vectors coincide."""
    if phi.rep_kind != "bishop1_N1N2T" or psi.rep_kind != "frenet_NBT":
        raise SpinorError("theorem2 needs bishop1_N1N2T and frenet_NBT paths")
    _same_grid(phi, psi)
    if np.shape(theta1) != phi.s.shape:
        raise FrameError("theta1 does not match the grid")
    rot = np.exp(1j * np.asarray(theta1))[:, None]
    quad = np.linalg.norm(isotropic_vector(phi.spinors) - rot * isotropic_vector(psi.spinors), axis=1)
    tangent = np.linalg.norm(third_vector(phi.spinors) - third_vector(psi.spinors), axis=1)
    return residual_record("theorem2", np.maximum(quad, tangent), tol)


def check_theorem2_half_angle(phi: SpinorPath, psi: SpinorPath, theta1, tol: float = 1e-6) -> CheckRecord:
    _same_grid(phi, psi)
    rotated = psi.spinors * np.exp(0.5j * np.asarray(theta1))[:, None]
    d = np.minimum(np.linalg.norm(phi.spinors - rotated, axis=1),
                   np.linalg.norm(phi.spinors + rotated, axis=1))
    return residual_record("theorem2.half_angle", d, tol)


def check_theorem4(lam: SpinorPath, psi_tnb: SpinorPath, theta2, tol: float = 1e-6) -> CheckRecord:
    """Type-2 Bishop spinor vs Frenet {T,N,B} spinor: quadratic forms differ
    by -i exp(i theta2), third vectors (B) coincide."""
    if lam.rep_kind != "bishop2_Z1Z2B" or psi_tnb.rep_kind != "frenet_TNB":
        raise SpinorError("theorem4 needs bishop2_Z1Z2B and frenet_TNB paths")
    _same_grid(lam, psi_tnb)
    if np.shape(theta2) != lam.s.shape:
        raise FrameError("theta2 does not match the grid")
    rot = 1j * np.exp(1j * np.asarray(theta2))[:, None]
    quad = np.linalg.norm(isotropic_vector(lam.spinors) + rot * isotropic_vector(psi_tnb.spinors), axis=1)
    binormal = np.linalg.norm(third_vector(lam.spinors) - third_vector(psi_tnb.spinors), axis=1)
    return residual_record("theorem4", np.maximum(quad, binormal), tol)


def angle_rate_from_bishop2(eps1, eps2, h):
    """(e2/e1)' / (1 + (e2/e1)^2) at interior samples, by central differences.

    Evaluated in the quotient form (e1 e2' - e2 e1') / (e1^2 + e2^2), which
    is the same expression but stays finite where e1 crosses zero.
    """
    e1, e2 = np.asarray(eps1, float), np.asarray(eps2, float)
    de1 = (e1[2:] - e1[:-2]) / (2 * h)
    de2 = (e2[2:] - e2[:-2]) / (2 * h)
    a, b = e1[1:-1], e2[1:-1]
    return (a * de2 - b * de1) / (a * a + b * b)


def check_double_cover(curve: SampledCurve, frame_kind: str = "frenet",
                       tolerances: ToleranceConfig | None = None) -> CheckRecord:
    """Lift the frames of a closed curve and compare the end spinor with +-start.

    The note is "-psi0" or "+psi0", whichever the end spinor is nearer to.
    """
    tol = tolerances or ToleranceConfig()
    if not curve.is_closed:
        raise CurveError("curve is not closed")
    if frame_kind == "frenet":
        path, _, _ = frenet_apparatus(curve)
        rep = "frenet_NBT"
    elif frame_kind == "bishop1":
        path, _, _ = bishop1_by_transport(curve)
        rep = "bishop1_N1N2T"
    else:
        raise ValueError(f"unsupported frame kind {frame_kind!r}")
    gap = float(np.max(np.abs(path.frames[-1] - path.frames[0])))
    if gap > tol.ode_tol:
        raise FrameError(f"frame does not close (gap {gap:.2e})")
    lifted = lift_frame_path(path, rep)
    start, end = lifted.spinors[0], lifted.spinors[-1]
    minus, plus = np.linalg.norm(end + start), np.linalg.norm(end - start)
    name = f"double_cover.{frame_kind}"
    note = "-psi0" if minus < plus else "+psi0"
    residual = float(min(minus, plus))
    return CheckRecord(name, residual, tol.ode_tol, residual <= tol.ode_tol, len(lifted) - 1, note)


def random_spinors(n, seed=0, scaled=True):
    """Gaussian spinors, optionally with norms spread over [0.1, 10]."""
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    psi /= np.sqrt(spinor_norm(psi))[:, None]
    if scaled:
        psi *= np.sqrt(10.0 ** rng.uniform(-1, 1, size=n))[:, None]
    return psi


def algebra_checks(n=1000, seed=0, tol: float = 1e-12, mate_tol: float = 1e-15) -> list[CheckRecord]:
    psi = random_spinors(n, seed)
    phi = random_spinors(n, seed + 1)
    unit = random_spinors(n, seed + 2, scaled=False)
    rng = np.random.default_rng(seed + 3)
    x, y = (rng.normal(size=(2, n)) + 1j * rng.normal(size=(2, n)))

    nrm = spinor_norm(psi)
    tri = triad_from_spinor(psi)
    m = isotropic_vector(psi)
    out = [residual_record("algebra.isotropy", np.abs(np.sum(m * m, axis=1)) / nrm**2, tol)]
    lengths = np.stack([np.linalg.norm(v, axis=1) for v in (tri.a, tri.b, tri.c)], axis=1)
    out.append(residual_record("algebra.norm_equality",
                               np.max(np.abs(lengths - nrm[:, None]), axis=1) / nrm, tol))
    vol = np.sum(np.cross(tri.a, tri.b) * tri.c, axis=1)
    orient = np.where(vol > 0, np.abs(vol - nrm**3) / nrm**3, np.inf)
    out.append(residual_record("algebra.orientation", orient, tol))

    scale = np.sqrt(spinor_norm(phi) * nrm)
    out.append(residual_record(
        "algebra.bilinear_symmetry",
        np.linalg.norm(bilinear_sigma(phi, psi) - bilinear_sigma(psi, phi), axis=1) / scale, mate_tol))
    out.append(residual_record(
        "algebra.mate_conjugation",
        np.linalg.norm(np.conj(bilinear_sigma(phi, psi)) + bilinear_sigma(mate(phi), mate(psi)), axis=1) / scale,
        mate_tol))
    lhs = mate(x[:, None] * phi + y[:, None] * psi)
    rhs = np.conj(x)[:, None] * mate(phi) + np.conj(y)[:, None] * mate(psi)
    size = np.abs(x) * np.sqrt(spinor_norm(phi)) + np.abs(y) * np.sqrt(nrm)
    out.append(residual_record("algebra.mate_antilinearity",
                               np.linalg.norm(lhs - rhs, axis=1) / size, mate_tol))
    out.append(residual_record("algebra.mate_involution",
                               np.linalg.norm(mate(mate(psi)) + psi, axis=1) / np.sqrt(nrm), mate_tol))
    mt = mate(psi)
    det = psi[:, 0] * mt[:, 1] - psi[:, 1] * mt[:, 0]
    out.append(residual_record("algebra.linear_independence", np.abs(det - nrm) / nrm, tol))

    back = spinor_from_triad(triad_from_spinor(unit), tol=1e-9)
    rt = np.minimum(np.linalg.norm(back - unit, axis=1), np.linalg.norm(back + unit, axis=1))
    out.append(residual_record("algebra.round_trip", rt, tol))
    return out


_FRENET_CHECKS = [
    "frenet.orthonormality", "frenet.vector_vs_closed_form", "frenet.spinor_vs_closed_form",
    "frenet.lift_vs_spinor", "bishop1.orthonormality", "bishop1.vector_vs_closed_form",
    "bishop1.spinor_vs_closed_form", "bishop1.spinor_vs_vector", "bishop1.transport_vs_closed_form",
    "bishop2.orthonormality", "bishop2.vector_vs_closed_form", "bishop2.spinor_vs_closed_form",
    "bishop2.spinor_vs_vector", "profile.kappa_from_bishop1", "profile.theta1_from_bishop1",
    "profile.frenet_from_bishop1", "profile.frenet_from_bishop2", "profile.bishop2_angle_rate",
    "spinor.unit_norm", "theorem2", "theorem2.half_angle", "theorem4", "double_cover.frenet",
]


def cross_check_frames(curve: SampledCurve, tolerances: ToleranceConfig | None = None,
                       theta1_0=0.0, theta2_0=0.0, skip_frenet=False,
                       algebra_samples=1000) -> VerificationReport:
    """Run every route on ``curve`` and compare them pairwise.

    Failures are recorded, not raised. Frenet-based checks are skipped when
    the curve has flat points (or on request); the Frenet-free type-1
    checks always run.
    """
    tol = tolerances or ToleranceConfig()
    report = VerificationReport()
    if algebra_samples:
        for rec in algebra_checks(algebra_samples, tol=tol.algebraic_tol):
            report.add(rec)

    flat = check_regularity(curve, REGULARITY_TOL)
    transport = transport_routes(curve, theta1_0=theta1_0)
    if skip_frenet or flat.any():
        reason = ("skipped on request" if skip_frenet
                  else f"Frenet frame singular at sample {int(np.argmax(flat))}")
        for name in _FRENET_CHECKS:
            report.add(skipped(name, tol.ode_tol, reason))
    else:
        _frenet_checks(report, frenet_routes(curve, theta1_0, theta2_0), transport, tol)

    report.add(check_orthonormality(transport.transported, tol.frame_tol, "transport.orthonormality"))
    report.add(check_frames_agree("transport.vector_vs_transport", transport.vector,
                                  transport.transported, tol.ode_tol))
    report.add(check_frames_agree("transport.spinor_vs_vector", frames_from_spinor_path(transport.spinor),
                                  transport.vector, tol.ode_tol))
    bound = curve.h * np.max(np.hypot(transport.k1, transport.k2))
    excess = np.maximum(step_rotation_angles(transport.vector) - bound, 0.0)
    report.add(residual_record("transport.step_rotation", excess, 1e-6))
    return report


def _frenet_checks(report: VerificationReport, r, transport, tol: ToleranceConfig):
    prof, closed, vector, spinor, lifted = r.profile, r.closed, r.vector, r.spinor, r.lifted
    for kind in ("frenet", "bishop1", "bishop2"):
        report.add(check_orthonormality(closed[kind], tol.frame_tol, f"{kind}.orthonormality"))
        report.add(check_frames_agree(f"{kind}.vector_vs_closed_form", vector[kind], closed[kind], tol.ode_tol))
        report.add(check_frames_agree(f"{kind}.spinor_vs_closed_form", frames_from_spinor_path(spinor[kind]),
                                      closed[kind], tol.theorem_tol))
        if kind == "frenet":
            d = np.linalg.norm(lifted["frenet_NBT"].spinors - spinor["frenet"].spinors, axis=1)
            report.add(residual_record("frenet.lift_vs_spinor", d, tol.ode_tol))
        else:
            report.add(check_frames_agree(f"{kind}.spinor_vs_vector", frames_from_spinor_path(spinor[kind]),
                                          vector[kind], tol.ode_tol))
        if kind == "bishop1":
            report.add(check_frames_agree("bishop1.transport_vs_closed_form", transport.transported,
                                          closed["bishop1"], tol.ode_tol))

    report.add(residual_record("profile.kappa_from_bishop1",
                               np.abs(prof.kappa - np.hypot(prof.k1, prof.k2)), tol.algebraic_tol))
    _, theta = curvatures_from_bishop1(prof.k1, prof.k2)
    offset = np.round((prof.theta1[0] - theta[0]) / (2 * np.pi)) * 2 * np.pi
    report.add(residual_record("profile.theta1_from_bishop1", np.abs(theta + offset - prof.theta1),
                               tol.algebraic_tol * max(1.0, float(np.max(np.abs(prof.theta1))))))
    b1, b2, fr = closed["bishop1"], closed["bishop2"], closed["frenet"]
    c1, s1 = np.cos(prof.theta1)[:, None], np.sin(prof.theta1)[:, None]
    n_back = c1 * b1.e2 + s1 * b1.e3
    b_back = -s1 * b1.e2 + c1 * b1.e3
    report.add(residual_record("profile.frenet_from_bishop1",
                               np.maximum(np.abs(n_back - fr.e2).max(1), np.abs(b_back - fr.e3).max(1)),
                               tol.frame_tol))
    c2, s2 = np.cos(prof.theta2)[:, None], np.sin(prof.theta2)[:, None]
    t_back = s2 * b2.e1 - c2 * b2.e2
    n_back = c2 * b2.e1 + s2 * b2.e2
    report.add(residual_record("profile.frenet_from_bishop2",
                               np.maximum(np.abs(t_back - fr.e1).max(1), np.abs(n_back - fr.e2).max(1)),
                               tol.frame_tol))
    if np.min(np.abs(prof.tau)) > 1e-6:
        rate = angle_rate_from_bishop2(prof.eps1, prof.eps2, r.curve.h)
        report.add(residual_record("profile.bishop2_angle_rate", np.abs(rate - prof.kappa[1:-1]), tol.fd_tol))
    else:
        report.add(skipped("profile.bishop2_angle_rate", tol.fd_tol, "torsion vanishes; e2/e1 undefined"))

    norms = np.concatenate([p.norm_defect() for p in list(spinor.values()) + list(lifted.values())])
    report.add(residual_record("spinor.unit_norm", norms, tol.frame_tol))
    report.add(check_theorem2(spinor["bishop1"], lifted["frenet_NBT"], prof.theta1, tol.theorem_tol))
    report.add(check_theorem2_half_angle(spinor["bishop1"], lifted["frenet_NBT"], prof.theta1, tol.theorem_tol))
    report.add(check_theorem4(spinor["bishop2"], lifted["frenet_TNB"], prof.theta2, tol.theorem_tol))
    if r.curve.is_closed:
        try:
            report.add(check_double_cover(r.curve, "frenet", tol))
        except FrameError as exc:
            report.add(skipped("double_cover.frenet", tol.ode_tol, str(exc)))
    else:
        report.add(skipped("double_cover.frenet", tol.ode_tol, "curve not closed"))
