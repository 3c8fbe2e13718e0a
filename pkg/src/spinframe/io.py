"""File formats: frame-field tables, verification reports, tube meshes.

Reals are written with 17 significant digits so a written table reads back
bit-for-bit. All writes go to a temporary file in the target directory and
are renamed into place.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .frames import FramePath

BASE_COLUMNS = ["s", "x", "y", "z",
                "e1x", "e1y", "e1z", "e2x", "e2y", "e2z", "e3x", "e3y", "e3z"]
CURVATURE_COLUMNS = {
    "frenet": ["kappa", "tau"],
    "bishop1": ["k1", "k2", "theta1"],
    "bishop2": ["eps1", "eps2", "theta2"],
}


def atomic_write(path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def make_header(timestamp: bool = True, **fields):
    from . import __version__

    header = dict(fields)
    header["version"] = __version__
    if timestamp:
        header["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return header


@dataclass
class FrameFieldDocument:
    header: dict
    columns: list[str]
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        kind = self.header.get("frame")
        if kind in CURVATURE_COLUMNS and self.columns != BASE_COLUMNS + CURVATURE_COLUMNS[kind]:
            raise ValueError(f"columns do not match frame kind {kind}")
        if self.data.ndim != 2 or self.data.shape[1] != len(self.columns):
            raise ValueError("data shape does not match columns")
        if not np.all(np.isfinite(self.data)):
            raise ValueError("frame field contains non-finite values")
        if np.any(np.diff(self.data[:, 0]) <= 0):
            raise ValueError("s column must be strictly increasing")

    @classmethod
    def from_path(cls, path: FramePath, positions, curvatures: dict, header: dict):
        cols = BASE_COLUMNS + CURVATURE_COLUMNS[path.kind]
        data = np.column_stack([path.s, positions, path.frames.reshape(len(path), 9)]
                               + [curvatures[c] for c in CURVATURE_COLUMNS[path.kind]])
        return cls(dict(header, frame=path.kind), cols, data)

    def column(self, name):
        return self.data[:, self.columns.index(name)]

    def frames(self):
        return self.data[:, 4:13].reshape(-1, 3, 3)

    def to_csv(self) -> str:
        lines = ["# " + json.dumps(self.header, sort_keys=True), ",".join(self.columns)]
        lines += [",".join(_fmt(v) for v in row) for row in self.data]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {"header": self.header, "columns": self.columns, "rows": self.data.tolist()}
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    @classmethod
    def parse(cls, text: str) -> "FrameFieldDocument":
        if text.startswith("#"):
            head, names, *rows = text.splitlines()
            header = json.loads(head[1:])
            data = np.array([[float(v) for v in r.split(",")] for r in rows if r.strip()])
            return cls(header, names.split(","), data)
        doc = json.loads(text)
        return cls(doc["header"], doc["columns"], np.array(doc["rows"], dtype=float))

    def write(self, path, fmt="csv"):
        atomic_write(path, self.to_csv() if fmt == "csv" else self.to_json())

    @classmethod
    def read(cls, path) -> "FrameFieldDocument":
        return cls.parse(Path(path).read_text(encoding="utf-8"))


def _fmt(v: float) -> str:
    return format(v, ".17g")


def report_document(report, header: dict) -> str:
    checks = []
    for c in report.checks:
        checks.append({
            "name": c.name,
            "max_residual": c.max_residual,
            "tolerance": c.tolerance,
            "pass": c.passed,
            "status": c.status,
            "worst_index": c.worst_index,
            "note": c.note,
        })
    doc = {"header": header, "passed": report.passed, "checks": checks}
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


@dataclass
class TubeMesh:
    vertices: np.ndarray
    faces: np.ndarray
    rings: int
    segments: int

    def __post_init__(self):
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("face index out of range")

    def vertex(self, ring, j):
        return self.vertices[ring * self.segments + j]

    def face_normals(self):
        v = self.vertices[self.faces]
        return np.cross(v[:, 2] - v[:, 0], v[:, 3] - v[:, 1])

    def to_obj(self) -> str:
        lines = [f"# tube mesh: {self.rings} rings x {self.segments} segments"]
        lines += ["v " + " ".join(_fmt(c) for c in p) for p in self.vertices]
        lines += ["f " + " ".join(str(i + 1) for i in f) for f in self.faces]
        return "\n".join(lines) + "\n"


def tube_mesh(positions, u, v, radius: float, segments: int) -> TubeMesh:
    """Sweep a circle of ``radius`` spanned by (u, v) along ``positions``.

    Vertex (i, j) = p_i + r (cos(2 pi j/n) u_i + sin(2 pi j/n) v_i). Quads are
    wound so their normals point away from the curve when (T, u, v) is
    right-handed.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    if segments < 3:
        raise ValueError("need at least 3 segments")
    positions, u, v = (np.asarray(a, dtype=float) for a in (positions, u, v))
    ang = 2 * math.pi * np.arange(segments) / segments
    ring = (np.cos(ang)[None, :, None] * u[:, None, :] + np.sin(ang)[None, :, None] * v[:, None, :])
    verts = (positions[:, None, :] + radius * ring).reshape(-1, 3)
    n = len(positions)
    i, j = np.meshgrid(np.arange(n - 1), np.arange(segments), indexing="ij")
    jn = (j + 1) % segments
    faces = np.stack([i * segments + j, i * segments + jn, (i + 1) * segments + jn, (i + 1) * segments + j],
                     axis=-1).reshape(-1, 4)
    return TubeMesh(verts, faces, n, segments)


def read_obj(text: str):
    verts, faces = [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(x) - 1 for x in parts[1:]])
    return np.array(verts), np.array(faces, dtype=int)
