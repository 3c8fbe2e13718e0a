"""Curve definitions and arc-length sampling.

Every curve, analytic or polyline, ends up as a :class:`SampledCurve`: a
uniform arc-length grid with position and the first three arc-length
derivatives at each sample. Analytic presets use closed-form derivatives,
polylines are re-gridded by chord length and differentiated numerically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Mapping

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import PchipInterpolator

from .errors import CurveError

KINDS = ("line", "circle", "helix", "polyline", "generic-parametric")
MIN_SAMPLES = 5
REGULARITY_TOL = 1e-8
ANALYTIC_UNIT_TOL = 1e-9
POLYLINE_UNIT_TOL = 1e-3
DEFAULT_SAMPLES = 1001

_REQUIRED_PARAMS = {
    "line": (),
    "circle": ("r",),
    "helix": ("a", "b"),
    "generic-parametric": (),
}


@dataclass(frozen=True)
class CurveSpec:
    kind: str
    params: Mapping[str, float] = field(default_factory=dict)
    domain: tuple[float, float] | None = None
    sample_count: int = DEFAULT_SAMPLES
    points: np.ndarray | None = None
    expr: tuple[str, str, str] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CurveError(f"unknown curve kind {self.kind!r}")
        if int(self.sample_count) != self.sample_count or self.sample_count < MIN_SAMPLES:
            raise CurveError(f"sample_count must be an integer >= {MIN_SAMPLES}, got {self.sample_count}")
        for name, value in self.params.items():
            if not math.isfinite(value):
                raise CurveError(f"parameter {name!r} is not finite")
        if self.kind == "polyline":
            pts = np.asarray(self.points, dtype=float) if self.points is not None else None
            if pts is None or pts.ndim != 2 or pts.shape[1] != 3:
                raise CurveError("polyline needs 'points' as a list of 3-vectors")
            if len(pts) < MIN_SAMPLES:
                raise CurveError(f"polyline needs at least {MIN_SAMPLES} points, got {len(pts)}")
            if not np.all(np.isfinite(pts)):
                raise CurveError("polyline contains non-finite coordinates")
            seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
            if np.any(seg == 0.0):
                i = int(np.flatnonzero(seg == 0.0)[0])
                raise CurveError(f"polyline points {i} and {i + 1} coincide")
            object.__setattr__(self, "points", pts)
            return
        missing = [p for p in _REQUIRED_PARAMS[self.kind] if p not in self.params]
        if missing:
            raise CurveError(f"{self.kind} curve missing params: {', '.join(missing)}")
        if self.domain is None or len(self.domain) != 2:
            raise CurveError(f"{self.kind} curve needs a domain [t0, t1]")
        t0, t1 = (float(v) for v in self.domain)
        if not (math.isfinite(t0) and math.isfinite(t1)) or t1 <= t0:
            raise CurveError(f"degenerate domain {self.domain}")
        object.__setattr__(self, "domain", (t0, t1))
        if self.kind == "circle" and self.params["r"] <= 0:
            raise CurveError("circle radius must be positive")
        if self.kind == "helix" and self.params["a"] == 0 and self.params["b"] == 0:
            raise CurveError("helix with a = b = 0 is a point")
        if self.kind == "line" and _line_direction(self.params).dot(_line_direction(self.params)) == 0:
            raise CurveError("line direction is zero")
        if self.kind == "generic-parametric":
            if self.expr is None or len(self.expr) != 3:
                raise CurveError("generic-parametric curve needs 'expr': [x(t), y(t), z(t)]")
            object.__setattr__(self, "expr", tuple(str(e) for e in self.expr))

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"kind": self.kind}
        if self.kind == "polyline":
            doc["points"] = self.points.tolist()
            doc["samples"] = self.sample_count
            return doc
        doc["params"] = dict(self.params)
        doc["domain"] = list(self.domain)
        doc["samples"] = self.sample_count
        if self.expr is not None:
            doc["expr"] = list(self.expr)
        return doc


@dataclass(frozen=True)
class SampledCurve:
    """Uniform arc-length samples of a unit-speed curve."""

    s: np.ndarray
    position: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray
    unit_tol: float = ANALYTIC_UNIT_TOL
    regular: np.ndarray = field(init=False)

    def __post_init__(self):
        n = len(self.s)
        for name in ("position", "d1", "d2", "d3"):
            arr = getattr(self, name)
            if arr.shape != (n, 3):
                raise CurveError(f"{name} has shape {arr.shape}, expected ({n}, 3)")
        if n < MIN_SAMPLES:
            raise CurveError(f"need at least {MIN_SAMPLES} samples")
        if np.any(np.diff(self.s) <= 0):
            raise CurveError("arc-length grid must be strictly increasing")
        for name in ("s", "position", "d1", "d2", "d3"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise CurveError(f"non-finite values in {name}")
        speed = np.linalg.norm(self.d1, axis=1)
        object.__setattr__(self, "regular", np.abs(speed - 1.0) <= self.unit_tol)

    def __len__(self):
        return len(self.s)

    @property
    def h(self) -> float:
        return float(self.s[1] - self.s[0])

    @property
    def length(self) -> float:
        return float(self.s[-1] - self.s[0])

    @property
    def is_closed(self) -> bool:
        return bool(np.linalg.norm(self.position[-1] - self.position[0]) <= 1e-6)


def _line_direction(params):
    return np.array([params.get("dx", 1.0), params.get("dy", 0.0), params.get("dz", 0.0)], dtype=float)


def load_curve_spec(source: str | bytes | Mapping[str, Any]) -> CurveSpec:
    """Parse a curve document (JSON text or an already-decoded mapping)."""
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise CurveError(f"malformed curve document: {exc}") from exc
    else:
        doc = source
    if not isinstance(doc, Mapping):
        raise CurveError("curve document must be an object")
    if "kind" not in doc:
        raise CurveError("curve document has no 'kind'")
    kind = doc["kind"]
    unknown = set(doc) - {"kind", "params", "domain", "samples", "points", "expr"}
    if unknown:
        raise CurveError(f"unknown keys in curve document: {sorted(unknown)}")
    params = doc.get("params", {}) or {}
    if not isinstance(params, Mapping):
        raise CurveError("'params' must be an object of named numbers")
    try:
        params = {str(k): float(v) for k, v in params.items()}
    except (TypeError, ValueError) as exc:
        raise CurveError(f"non-numeric parameter: {exc}") from exc
    points = doc.get("points")
    if kind == "polyline":
        if points is None:
            raise CurveError("polyline needs 'points'")
        try:
            points = np.asarray(points, dtype=float)
        except (TypeError, ValueError) as exc:
            raise CurveError(f"bad polyline points: {exc}") from exc
        samples = doc.get("samples", len(points))
    else:
        samples = doc.get("samples", DEFAULT_SAMPLES)
    if isinstance(samples, bool) or not isinstance(samples, (int, float)):
        raise CurveError("'samples' must be an integer")
    domain = doc.get("domain")
    if domain is not None:
        try:
            domain = tuple(float(v) for v in domain)
        except (TypeError, ValueError) as exc:
            raise CurveError(f"bad domain: {exc}") from exc
    expr = doc.get("expr")
    return CurveSpec(kind=kind, params=params, domain=domain, sample_count=samples,
                     points=points, expr=tuple(expr) if expr is not None else None)


def helix_spec(a=1.0, b=1.0, s_max=4 * math.pi, samples=DEFAULT_SAMPLES) -> CurveSpec:
    """Helix (a cos t, a sin t, b t) covering arc length [0, s_max]."""
    c = math.hypot(a, b)
    return CurveSpec("helix", {"a": a, "b": b}, (0.0, s_max / c), samples)


def circle_spec(r=1.0, turns=1.0, samples=DEFAULT_SAMPLES) -> CurveSpec:
    return CurveSpec("circle", {"r": r}, (0.0, 2 * math.pi * turns), samples)


def line_spec(length=1.0, direction=(1.0, 0.0, 0.0), samples=DEFAULT_SAMPLES) -> CurveSpec:
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return CurveSpec("line", {"dx": d[0], "dy": d[1], "dz": d[2]}, (0.0, length), samples)


def cubic_polyline_spec(x_min=-1.0, x_max=1.0, points=2001) -> CurveSpec:
    """Polyline through y = x**3 in the xy-plane (inflection at x = 0)."""
    x = np.linspace(x_min, x_max, points)
    return CurveSpec("polyline", points=np.column_stack([x, x**3, np.zeros_like(x)]),
                     sample_count=points)


def steps_for(length: float, step: float) -> int:
    """Sample count whose uniform spacing over ``length`` does not exceed ``step``."""
    if step <= 0:
        raise CurveError("step must be positive")
    return max(MIN_SAMPLES, int(math.ceil(length / step - 1e-9)) + 1)


def with_step(spec: CurveSpec, step: float) -> CurveSpec:
    return replace(spec, sample_count=steps_for(curve_length(spec), step))


def curve_length(spec: CurveSpec) -> float:
    if spec.kind == "polyline":
        return float(np.linalg.norm(np.diff(spec.points, axis=0), axis=1).sum())
    t0, t1 = spec.domain
    p = spec.params
    if spec.kind == "line":
        return float(np.linalg.norm(_line_direction(p))) * (t1 - t0)
    if spec.kind == "circle":
        return p["r"] * (t1 - t0)
    if spec.kind == "helix":
        return math.hypot(p["a"], p["b"]) * (t1 - t0)
    funcs = _generic_functions(spec)
    return _generic_length(funcs, t0, t1)


def sample_curve(spec: CurveSpec) -> SampledCurve:
    n = spec.sample_count
    if spec.kind == "polyline":
        t = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(spec.points, axis=0), axis=1))])
        return reparameterize_arclength(t, spec.points, samples=n)
    t0, t1 = spec.domain
    p = spec.params
    if spec.kind == "line":
        d = _line_direction(p)
        speed = np.linalg.norm(d)
        s = np.linspace(0.0, speed * (t1 - t0), n)
        origin = np.array([p.get("x0", 0.0), p.get("y0", 0.0), p.get("z0", 0.0)])
        pos = origin + np.outer(t0 + s / speed, d)
        zeros = np.zeros((n, 3))
        return SampledCurve(s, pos, np.tile(d / speed, (n, 1)), zeros, zeros.copy())
    if spec.kind == "circle":
        r = p["r"]
        s = np.linspace(0.0, r * (t1 - t0), n)
        t = t0 + s / r
        c, sn, z = np.cos(t), np.sin(t), np.zeros(n)
        return SampledCurve(
            s,
            np.column_stack([r * c, r * sn, z]),
            np.column_stack([-sn, c, z]),
            np.column_stack([-c, -sn, z]) / r,
            np.column_stack([sn, -c, z]) / r**2,
        )
    if spec.kind == "helix":
        a, b = p["a"], p["b"]
        w = math.hypot(a, b)
        s = np.linspace(0.0, w * (t1 - t0), n)
        t = t0 + s / w
        c, sn, z = np.cos(t), np.sin(t), np.zeros(n)
        return SampledCurve(
            s,
            np.column_stack([a * c, a * sn, b * t]),
            np.column_stack([-a * sn, a * c, np.full(n, b)]) / w,
            np.column_stack([-a * c, -a * sn, z]) / w**2,
            np.column_stack([a * sn, -a * c, z]) / w**3,
        )
    return _sample_generic(spec)


def _generic_functions(spec):
    import sympy as sp

    t = sp.Symbol("t", real=True)
    local = {name: sp.Float(v) for name, v in spec.params.items()}
    local["t"] = t
    try:
        alpha = sp.Matrix([sp.sympify(e, locals=local) for e in spec.expr])
    except (sp.SympifyError, TypeError, SyntaxError) as exc:
        raise CurveError(f"cannot parse expression: {exc}") from exc
    if alpha.free_symbols - {t}:
        raise CurveError(f"unbound symbols in expression: {alpha.free_symbols - {t}}")
    vel = alpha.diff(t)
    speed = sp.sqrt(vel.dot(vel))
    d1 = vel / speed
    d2 = d1.diff(t) / speed
    d3 = d2.diff(t) / speed

    def vectorize(mat):
        fns = [sp.lambdify(t, comp, "numpy") for comp in mat]
        return lambda x: np.column_stack([np.broadcast_to(np.asarray(f(x), dtype=float), np.shape(x)) for f in fns])

    speed_fn = sp.lambdify(t, speed, "numpy")
    return {
        "position": vectorize(alpha),
        "d1": vectorize(d1),
        "d2": vectorize(d2),
        "d3": vectorize(d3),
        "speed": lambda x: float(speed_fn(x)),
    }


def _generic_length(funcs, t0, t1):
    length, _ = quad(funcs["speed"], t0, t1, epsabs=1e-13, epsrel=1e-13, limit=500)
    return length


def _sample_generic(spec):
    funcs = _generic_functions(spec)
    t0, t1 = spec.domain
    probe = np.linspace(t0, t1, 257)
    if min(funcs["speed"](x) for x in probe) <= 1e-12:
        raise CurveError("generic curve has a stationary point (zero speed)")
    length = _generic_length(funcs, t0, t1)
    s = np.linspace(0.0, length, spec.sample_count)
    sol = solve_ivp(lambda _, y: [1.0 / funcs["speed"](y[0])], (0.0, length), [t0],
                    t_eval=s, method="DOP853", rtol=1e-13, atol=1e-13)
    if not sol.success:
        raise CurveError(f"arc-length inversion failed: {sol.message}")
    t = np.clip(sol.y[0], t0, t1)
    return SampledCurve(s, funcs["position"](t), funcs["d1"](t), funcs["d2"](t), funcs["d3"](t))


def reparameterize_arclength(t, positions, samples: int | None = None) -> SampledCurve:
    """Re-grid raw samples to uniform chord-length spacing.

    ``t`` is the raw parameter (only its monotonicity matters). Coordinates are
    interpolated against cumulative chord length with a monotone piecewise
    cubic, then differentiated by :func:`estimate_derivatives`.
    """
    t = np.asarray(t, dtype=float)
    pos = np.asarray(positions, dtype=float)
    if pos.ndim != 2 or pos.shape[1] != 3 or len(pos) != len(t):
        raise CurveError("positions must be (n, 3) and match the parameter samples")
    if len(t) < MIN_SAMPLES:
        raise CurveError(f"need at least {MIN_SAMPLES} samples, got {len(t)}")
    if np.any(np.diff(t) <= 0):
        raise CurveError("parameter samples must be strictly increasing")
    seg = np.linalg.norm(np.diff(pos, axis=0), axis=1)
    if np.any(seg == 0.0):
        raise CurveError(f"repeated point at sample {int(np.flatnonzero(seg == 0.0)[0]) + 1}")
    chord = np.concatenate([[0.0], np.cumsum(seg)])
    n = len(t) if samples is None else int(samples)
    if n < MIN_SAMPLES:
        raise CurveError(f"need at least {MIN_SAMPLES} output samples")
    s = np.linspace(0.0, chord[-1], n)
    resampled = PchipInterpolator(chord, pos, axis=0)(s)
    resampled[0], resampled[-1] = pos[0], pos[-1]
    d1, d2, d3 = estimate_derivatives(s, resampled)
    return SampledCurve(s, resampled, d1, d2, d3, unit_tol=POLYLINE_UNIT_TOL)


def estimate_derivatives(s, positions, rtol=1e-6):
    """Second-order finite differences on a uniform grid.

    Interior: centred 3-point stencils for d1 and d2, and the 5-point stencil
    for d3 (centred difference of the compact d2). Ends: one-sided
    second-order stencils.
    """
    s = np.asarray(s, dtype=float)
    p = np.asarray(positions, dtype=float)
    if len(s) < MIN_SAMPLES or len(p) != len(s):
        raise CurveError(f"need at least {MIN_SAMPLES} samples on the grid")
    steps = np.diff(s)
    h = (s[-1] - s[0]) / (len(s) - 1)
    if h <= 0 or np.max(np.abs(steps - h)) > rtol * h:
        raise CurveError("grid is not uniform")
    d1 = np.gradient(p, h, axis=0, edge_order=2)
    d2 = np.empty_like(p)
    d2[1:-1] = (p[2:] - 2 * p[1:-1] + p[:-2]) / h**2
    d2[0] = (2 * p[0] - 5 * p[1] + 4 * p[2] - p[3]) / h**2
    d2[-1] = (2 * p[-1] - 5 * p[-2] + 4 * p[-3] - p[-4]) / h**2
    d3 = np.gradient(d2, h, axis=0, edge_order=2)
    return d1, d2, d3


def check_regularity(curve: SampledCurve, tol: float = REGULARITY_TOL) -> np.ndarray:
    """True where the Frenet frame is ill-defined (curvature below ``tol``)."""
    return np.linalg.norm(curve.d2, axis=1) < tol
