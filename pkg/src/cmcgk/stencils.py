"""Fourth-order finite differences on rectangular grids.

Arrays are indexed ``f[i, j]`` with i along u (axis 0) and j along v (axis 1).
Interior nodes use centred five-point stencils; the two outermost nodes on each
side use one-sided stencils of the same order so results are defined everywhere,
but statistics should still be taken over an interior margin.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "MIN_NODES",
    "diff1",
    "diff2",
    "wirtinger",
    "laplacian_quarter",
    "interior",
    "midpoints",
    "interpolate",
    "refinement_slope",
]

MIN_NODES = 5

_C2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


@lru_cache(maxsize=None)
def _weights(offsets: tuple, deriv: int) -> np.ndarray:
    """Finite-difference weights for the ``deriv``-th derivative on integer ``offsets``."""
    k = np.asarray(offsets, dtype=float)
    V = np.vander(k, increasing=True).T
    rhs = np.zeros(len(k))
    rhs[deriv] = math.factorial(deriv)
    return np.linalg.solve(V, rhs)


def _check(n: int, width: int = MIN_NODES):
    if n < max(width, MIN_NODES):
        raise ValueError(f"grid too small: need at least {max(width, MIN_NODES)} nodes per axis, got {n}")


def diff1(f: np.ndarray, h: float, axis: int, order: int = 4, edge_extra: int = 0) -> np.ndarray:
    """First derivative along ``axis`` with step ``h`` and even accuracy ``order``.

    Nodes closer than order/2 to an edge use a window shifted inwards, widened
    by ``edge_extra`` points (one-sided stencils have larger error constants).
    """
    if order % 2 or order < 2:
        raise ValueError("order must be a positive even integer")
    f = np.asarray(f)
    n = f.shape[axis]
    m = order // 2
    width = order + 1 + edge_extra
    _check(n, width)
    fa = np.moveaxis(f, axis, 0)
    out = np.zeros_like(fa, dtype=np.result_type(fa, float))
    w = _weights(tuple(range(-m, m + 1)), 1)
    for k, wk in zip(range(-m, m + 1), w):
        if wk != 0:
            out[m : n - m] += wk * fa[m + k : n - m + k]
    for i in list(range(m)) + list(range(n - m, n)):
        lo = min(max(i - m - edge_extra // 2, 0), n - width)
        offs = tuple(range(lo - i, lo - i + width))
        wi = _weights(offs, 1)
        out[i] = sum(wk * fa[i + o] for o, wk in zip(offs, wi))
    return np.moveaxis(out / h, 0, axis)


def diff2(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Second derivative along ``axis``; boundary rows fall back to nested first differences."""
    f = np.asarray(f)
    n = f.shape[axis]
    _check(n)
    nested = np.moveaxis(diff1(diff1(f, h, axis), h, axis), axis, 0)
    fa = np.moveaxis(f, axis, 0)
    out = nested.copy()
    out[2 : n - 2] = (
        fa[:-4] * _C2[0] + fa[1:-3] * _C2[1] + fa[2:-2] * _C2[2] + fa[3:-1] * _C2[3] + fa[4:] * _C2[4]
    ) / (h * h)
    return np.moveaxis(out, 0, axis)


def wirtinger(f: np.ndarray, hu: float, hv: float, order: int = 4, edge_extra: int = 0):
    """(f_z, f_zbar) with f_z = (f_u - i f_v) / 2 and f_zbar = (f_u + i f_v) / 2."""
    fu = diff1(f, hu, 0, order, edge_extra)
    fv = diff1(f, hv, 1, order, edge_extra)
    return 0.5 * (fu - 1j * fv), 0.5 * (fu + 1j * fv)


def laplacian_quarter(f: np.ndarray, hu: float, hv: float) -> np.ndarray:
    """f_{z zbar} = (f_uu + f_vv) / 4."""
    return 0.25 * (diff2(f, hu, 0) + diff2(f, hv, 1))


def interior(a: np.ndarray, margin: int) -> np.ndarray:
    """Drop ``margin`` nodes from every side of a 2-D grid array."""
    if margin == 0:
        return a
    return a[margin:-margin, margin:-margin]


_MID = np.array([-1.0, 9.0, 9.0, -1.0]) / 16.0
_MID_EDGE = np.array([5.0, 15.0, -5.0, 1.0]) / 16.0


def midpoints(f: np.ndarray, axis: int) -> np.ndarray:
    """Cubic interpolation of nodal values to the n - 1 cell midpoints along ``axis``."""
    f = np.asarray(f)
    n = f.shape[axis]
    if n < 4:
        raise ValueError("midpoint interpolation needs at least 4 nodes")
    fa = np.moveaxis(f, axis, 0)
    out = np.empty((n - 1,) + fa.shape[1:], dtype=fa.dtype)
    out[1 : n - 2] = _MID[0] * fa[:-3] + _MID[1] * fa[1:-2] + _MID[2] * fa[2:-1] + _MID[3] * fa[3:]
    out[0] = sum(w * fa[k] for k, w in enumerate(_MID_EDGE))
    out[n - 2] = sum(w * fa[n - 1 - k] for k, w in enumerate(_MID_EDGE))
    return np.moveaxis(out, 0, axis)


def interpolate(f: np.ndarray, axis: int, t: float, points: int = 6) -> np.ndarray:
    """Lagrange interpolation of nodal values to the n - 1 points k + t (0 < t < 1) along ``axis``.

    Uses ``points`` nodes centred on the cell, shifted inwards at the edges.
    """
    f = np.asarray(f)
    n = f.shape[axis]
    if n < points:
        raise ValueError(f"interpolation needs at least {points} nodes")
    fa = np.moveaxis(f, axis, 0)
    out = np.empty((n - 1,) + fa.shape[1:], dtype=np.result_type(fa, float))
    half = points // 2
    for k in range(n - 1):
        lo = min(max(k + 1 - half, 0), n - points)
        x = np.arange(lo, lo + points) - (k + t)
        w = np.array([np.prod([-x[j] / (x[i] - x[j]) for j in range(points) if j != i]) for i in range(points)])
        out[k] = np.tensordot(w, fa[lo : lo + points], axes=1)
    return np.moveaxis(out, 0, axis)


def refinement_slope(steps, errors) -> float:
    """Least-squares slope of log(error) against log(step)."""
    steps = np.asarray(steps, dtype=float)
    errors = np.asarray(errors, dtype=float)
    return float(np.polyfit(np.log(steps), np.log(errors), 1)[0])
