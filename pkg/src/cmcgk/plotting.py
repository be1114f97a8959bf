"""Static figures written next to CLI reports."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["plot_surface", "plot_residual_maps", "plot_checks"]


def plot_surface(points: np.ndarray, path: str | Path, title: str = "", color=None) -> Path:
    """3-D view of model coordinates (nu, nv, 3), shaded by ``color`` (default x3)."""
    X, Y, Z = points[..., 0], points[..., 1], points[..., 2]
    C = Z if color is None else np.asarray(color, dtype=float)
    span = np.ptp(C)
    C = (C - C.min()) / span if span > 0 else np.zeros_like(C)
    fig = plt.figure(figsize=(6, 5))
    ax = fig.add_subplot(projection="3d")
    stride = max(1, points.shape[0] // 60)
    ax.plot_surface(X, Y, Z, facecolors=plt.cm.viridis(C), rstride=stride, cstride=stride,
                    linewidth=0, antialiased=False, shade=False)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_zlabel("x3")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_residual_maps(u, v, fields: dict, path: str | Path, floor: float = 1e-17) -> Path:
    """log10 heat maps of the absolute value of each named residual field."""
    n = len(fields)
    fig, axes = plt.subplots(1, n, figsize=(4.2 * n, 3.6), squeeze=False)
    ext = [u[0], u[-1], v[0], v[-1]]
    for ax, (name, f) in zip(axes[0], fields.items()):
        a = np.abs(np.asarray(f))
        a = np.where(np.isfinite(a), a, np.nan)
        im = ax.imshow(np.log10(np.maximum(a, floor)).T, origin="lower", extent=ext, aspect="auto", cmap="magma")
        ax.set_title(name)
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        fig.colorbar(im, ax=ax, label="log10 |residual|")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_checks(checks, path: str | Path) -> Path:
    """Residual of every check against its tolerance, on a log scale."""
    rows = [c for c in checks if c.finite and c.tolerance and c.relation == "le"]
    fig, ax = plt.subplots(figsize=(7, 0.28 * max(len(rows), 4) + 1))
    y = np.arange(len(rows))
    vals = [max(abs(c.value), 1e-18) for c in rows]
    tols = [c.tolerance for c in rows]
    colors = ["tab:green" if c.ok else "tab:red" for c in rows]
    ax.barh(y, vals, color=colors)
    ax.scatter(tols, y, marker="|", s=120, color="black", label="tolerance")
    ax.set_xscale("log")
    ax.set_yticks(y)
    ax.set_yticklabels([c.name for c in rows], fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("residual")
    ax.legend(loc="lower right", fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path
