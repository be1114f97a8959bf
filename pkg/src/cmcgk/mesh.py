"""Triangle-mesh export of gridded surfaces (OBJ and ASCII PLY)."""
from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["grid_faces", "export_mesh", "format_vertex"]


def grid_faces(nu: int, nv: int) -> np.ndarray:
    """0-based triangles of an nu x nv grid in row-major order.

    Each quad (i, j), (i+1, j), (i+1, j+1), (i, j+1) is split along its main
    diagonal (i, j) -- (i+1, j+1).
    """
    if nu < 2 or nv < 2:
        raise ValueError("a mesh needs at least 2 x 2 nodes")
    i, j = np.meshgrid(np.arange(nu - 1), np.arange(nv - 1), indexing="ij")
    a = (i * nv + j).ravel()
    b = ((i + 1) * nv + j).ravel()
    c = ((i + 1) * nv + j + 1).ravel()
    d = (i * nv + j + 1).ravel()
    return np.stack([np.stack([a, b, c], 1), np.stack([a, c, d], 1)], 1).reshape(-1, 3)


def format_vertex(x: float) -> str:
    """17 significant digits, enough to round-trip a double; -0.0 prints as 0."""
    return format(float(x) + 0.0, ".16e")


def export_mesh(points: np.ndarray, path: str | Path, fmt: str = "obj") -> Path:
    """Write points of shape (nu, nv, 3) as a triangle mesh.

    Vertices follow row-major node order; faces are 1-based in OBJ.  Non-finite
    coordinates are refused rather than written.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 3 or points.shape[2] != 3:
        raise ValueError("points must have shape (nu, nv, 3)")
    if not np.all(np.isfinite(points)):
        raise ValueError("refusing to export non-finite coordinates")
    nu, nv, _ = points.shape
    verts = points.reshape(-1, 3)
    faces = grid_faces(nu, nv)
    vlines = [" ".join(format_vertex(x) for x in row) for row in verts]
    if fmt == "obj":
        lines = [f"v {v}" for v in vlines]
        lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in faces]
    elif fmt == "ply":
        lines = [
            "ply",
            "format ascii 1.0",
            f"element vertex {len(verts)}",
            "property float x",
            "property float y",
            "property float z",
            f"element face {len(faces)}",
            "property list uchar int vertex_indices",
            "end_header",
        ]
        lines += vlines
        lines += [f"3 {a} {b} {c}" for a, b, c in faces]
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
