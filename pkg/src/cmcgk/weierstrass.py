"""Reconstruction of a critical CMC surface from its harmonic Gauss map.

Given a nowhere antiholomorphic harmonic g: Sigma -> D, the surface
X = (x1, x2, x3), zeta = x1 + i x2, solves

    zeta_z    =  2/(c + i tau) (1 - c zeta conj g)^2 g_z / (1 - |g|^2)^2
    zeta_zbar = -2/(c - i tau) (g - c zeta)^2 conj(g_z) / (1 - |g|^2)^2
    x3_z      =  eta/2 + (i tau / 2) (zeta conj(zeta_zbar) - conj(zeta) zeta_z) / (1 - c^2 |zeta|^2)

with eta = 2 <X_z, xi> given algebraically by g, g_z and zeta.  The system is
integrated with classical RK4 along grid lines: first along the row through the
base point, then along every column (or the transposed order).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, DomainError, DomainGuardAbort
from .harmonic import HarmonicMap
from .model import ModelParams, disk_margin

__all__ = [
    "ReconstructionInput",
    "ReconstructedSurface",
    "WeierstrassKernel",
    "rhs",
    "eta_of",
    "conformal_factor_of",
    "integrate",
    "sweep",
    "integrability_residual",
    "gauss_of_immersion",
    "DEFAULT_GUARD",
    "DEFAULT_HARMONIC_MAX",
]

DEFAULT_GUARD = 1e-6
DEFAULT_HARMONIC_MAX = 1e-6
DEFAULT_SUBSTEPS = 2


@dataclass(frozen=True)
class WeierstrassKernel:
    """The kernels U(G, zeta) and V(G) for mean curvature H."""

    U: complex
    V: complex

    @classmethod
    def evaluate(cls, params: ModelParams, G, zeta, H: float | None = None) -> "WeierstrassKernel":
        c, tau = params.c, params.tau
        H = c if H is None else H
        a = np.abs(G) ** 2
        U = H * (1 + a) ** 2 - 1j * tau * (1 - a) ** 2 + 2 * c * c * G * (np.conj(zeta) + np.conj(G) ** 2 * zeta)
        V = (H - c) * (1 + a) ** 2 - (c + 1j * tau) * (1 - a) ** 2
        return cls(U, V)


def _require_disk(params, g, zeta):
    if np.any(np.abs(g) >= 1):
        raise DomainError("g must take values in the unit disk")
    if params.c > 0 and np.any(disk_margin(params, zeta) <= 0):
        raise DomainError("zeta outside the disk |zeta| < 1/c")


def rhs(params: ModelParams, g, g_z, zeta, g_zbar=None):
    """(zeta_z, zeta_zbar, x3_z) of the representation system at the given data.

    ``g_zbar`` is accepted for symmetry with the grid calculus but not needed:
    the system only involves g, g_z and conj(g)_zbar = conj(g_z).
    """
    _require_disk(params, g, zeta)
    c, tau = params.c, params.tau
    gb = np.conj(g)
    m = (1 - np.abs(g) ** 2) ** 2
    zeta_z = 2 / (c + 1j * tau) * (1 - c * zeta * gb) ** 2 * g_z / m
    zeta_zb = -2 / (c - 1j * tau) * (g - c * zeta) ** 2 * np.conj(g_z) / m
    D = 1 - c * c * np.abs(zeta) ** 2
    eta = -4 / (c + 1j * tau) * (gb - c * np.conj(zeta)) * (1 - c * zeta * gb) * g_z / (D * m)
    x3_z = eta / 2 + 0.5j * tau * (zeta * np.conj(zeta_zb) - np.conj(zeta) * zeta_z) / D
    return zeta_z, zeta_zb, x3_z


def eta_of(params: ModelParams, g, g_z, zeta):
    """eta = 2 <X_z, xi> in terms of g, g_z and zeta."""
    _require_disk(params, g, zeta)
    c, tau = params.c, params.tau
    gb = np.conj(g)
    D = 1 - c * c * np.abs(zeta) ** 2
    return -4 / (c + 1j * tau) * (gb - c * np.conj(zeta)) * (1 - c * zeta * gb) * g_z / (
        D * (1 - np.abs(g) ** 2) ** 2
    )


def conformal_factor_of(params: ModelParams, g, g_z, zeta):
    """Closed-form conformal factor lambda of the reconstructed immersion.

    Equals (1 + |G|^2)^2 |eta|^2 / (4 |G|^2); the |g_z|^2 factor comes from eta.
    """
    c, tau = params.c, params.tau
    D = 1 - c * c * np.abs(zeta) ** 2
    num = 4 * (np.abs(1 - c * np.conj(zeta) * g) ** 2 + np.abs(g - c * zeta) ** 2) ** 2 * np.abs(g_z) ** 2
    return num / ((c * c + tau * tau) * D**2 * (1 - np.abs(g) ** 2) ** 4)


@dataclass
class ReconstructionInput:
    """Gauss map, model and initial data (z0, zeta0, x3_0) of a reconstruction."""

    params: ModelParams
    g: HarmonicMap
    z0: complex = 0j
    zeta0: complex = 0j
    x30: float = 0.0
    guard_min: float = DEFAULT_GUARD
    harmonic_max: float = DEFAULT_HARMONIC_MAX

    def __post_init__(self):
        if self.params.c <= 0:
            raise DomainError("reconstruction needs kappa < 0 (c > 0)")
        if disk_margin(self.params, self.zeta0) <= 0:
            raise DomainError("initial zeta0 outside the disk |zeta| < 1/c")
        self.basepoint = self._locate(self.z0)

    def _locate(self, z0):
        grid = self.g.grid
        i = int(np.argmin(np.abs(grid.u - np.real(z0))))
        j = int(np.argmin(np.abs(grid.v - np.imag(z0))))
        tol = 1e-9 * max(1.0, abs(z0)) + 1e-6 * min(grid.hu, grid.hv)
        if abs(grid.u[i] + 1j * grid.v[j] - z0) > tol:
            raise DomainError(f"base point z0={z0} is not a grid node")
        return i, j


@dataclass
class ReconstructedSurface:
    params: ModelParams
    u: np.ndarray
    v: np.ndarray
    zeta: np.ndarray
    x3: np.ndarray
    eta: np.ndarray
    lam: np.ndarray
    g: HarmonicMap
    basepoint: tuple
    order: str = "row-first"
    domain_margin: float = field(init=False)

    def __post_init__(self):
        self.domain_margin = float(np.min(disk_margin(self.params, self.zeta)))

    @property
    def x1(self):
        return self.zeta.real

    @property
    def x2(self):
        return self.zeta.imag

    def points(self) -> np.ndarray:
        """Model coordinates, shape (nu, nv, 3)."""
        return np.stack([self.x1, self.x2, self.x3], axis=-1)


def _line_derivative(params, zeta, g, gz, e):
    """(d zeta / dt, d x3 / dt) along the direction e (1 for u, 1j for v)."""
    zz, zzb, x3z = rhs(params, g, gz, zeta)
    return zz * e + zzb * np.conj(e), 2 * np.real(x3z * e)


def _sweep(params, zeta, x3, g, gz, gfrac, gzfrac, k0, h, e, guard, node_of):
    """Fill zeta[k], x3[k] (line index first, batch second) outward from k0 in place.

    ``gfrac[q - 1][k]`` holds g at the fraction q / (2 s) of cell k, s being the
    number of RK4 substeps per cell.
    """
    n = zeta.shape[0]
    s = (len(gfrac) + 1) // 2

    def fields(k, q):
        # g and g_z at fraction q / (2 s) of cell k
        if q == 0:
            return g[k], gz[k]
        if q == 2 * s:
            return g[k + 1], gz[k + 1]
        return gfrac[q - 1][k], gzfrac[q - 1][k]

    def step(k, knext):
        cell, sign = (k, 1) if knext > k else (knext, -1)
        dt = sign * h / s
        z, x = zeta[k], x3[k]
        for r in range(s):
            q0 = 2 * r if sign > 0 else 2 * s - 2 * r
            a, m, b = fields(cell, q0), fields(cell, q0 + sign), fields(cell, q0 + 2 * sign)
            k1z, k1x = _line_derivative(params, z, *a, e)
            k2z, k2x = _line_derivative(params, z + 0.5 * dt * k1z, *m, e)
            k3z, k3x = _line_derivative(params, z + 0.5 * dt * k2z, *m, e)
            k4z, k4x = _line_derivative(params, z + dt * k3z, *b, e)
            z = z + dt / 6 * (k1z + 2 * k2z + 2 * k3z + k4z)
            x = x + dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        zeta[knext], x3[knext] = z, x
        margin = 1 - params.c**2 * np.abs(z) ** 2
        bad = ~(margin >= guard)
        if np.any(bad):
            b = int(np.flatnonzero(bad)[0])
            raise DomainGuardAbort(
                f"domain guard tripped: 1 - c^2|zeta|^2 = {float(margin[b]):.3e} < {guard:.1e}",
                node=node_of(knext, b),
                detail={"margin": float(margin[b]), "guard": guard},
            )

    for k in range(k0, n - 1):
        step(k, k + 1)
    for k in range(k0, 0, -1):
        step(k, k - 1)


def _run(inp: ReconstructionInput, order: str, substeps: int = DEFAULT_SUBSTEPS):
    params = inp.params
    grid = inp.g.grid
    nu, nv = grid.shape
    i0, j0 = inp.basepoint
    g = grid.values
    gz = grid.derivatives()[0]
    fu, fzu = grid.line_fields(0, substeps)  # entries (nu - 1, nv)
    fv, fzv = grid.line_fields(1, substeps)  # entries (nu, nv - 1)
    col = lambda fs, sl: [f[sl] for f in fs]  # noqa: E731
    tr = lambda fs: [f.T for f in fs]  # noqa: E731
    zeta = np.full((nu, nv), np.nan + 0j)
    x3 = np.full((nu, nv), np.nan)
    guard = inp.guard_min
    try:
        if order == "row-first":
            sl = (slice(None), slice(j0, j0 + 1))
            zl, xl = zeta[sl].copy(), x3[sl].copy()
            zl[i0], xl[i0] = inp.zeta0, inp.x30
            _sweep(params, zl, xl, g[sl], gz[sl], col(fu, sl), col(fzu, sl), i0, grid.hu, 1.0, guard,
                   lambda k, b: (k, j0))
            zeta[:, j0], x3[:, j0] = zl[:, 0], xl[:, 0]
            zt, xt = zeta.T.copy(), x3.T.copy()
            _sweep(params, zt, xt, g.T, gz.T, tr(fv), tr(fzv), j0, grid.hv, 1j, guard,
                   lambda k, b: (b, k))
            zeta, x3 = zt.T, xt.T
        elif order == "column-first":
            sl = (slice(i0, i0 + 1), slice(None))
            zl, xl = zeta[sl].T.copy(), x3[sl].T.copy()
            zl[j0], xl[j0] = inp.zeta0, inp.x30
            _sweep(params, zl, xl, g[sl].T, gz[sl].T, tr(col(fv, sl)), tr(col(fzv, sl)), j0, grid.hv, 1j,
                   guard, lambda k, b: (i0, k))
            zeta[i0, :], x3[i0, :] = zl[:, 0], xl[:, 0]
            _sweep(params, zeta, x3, g, gz, fu, fzu, i0, grid.hu, 1.0, guard, lambda k, b: (k, b))
        else:
            raise ValueError(f"unknown sweep order {order!r}")
    except DomainGuardAbort as abort:
        i, j = abort.node
        abort.detail["z"] = complex(grid.u[i] + 1j * grid.v[j])
        abort.partial = (zeta, x3)
        raise
    return zeta, x3


def sweep(inp: ReconstructionInput, order: str = "row-first", substeps: int = DEFAULT_SUBSTEPS):
    """(zeta, x3) from one sweep order, without any input gating."""
    return _run(inp, order, substeps)


def _check_input(inp: ReconstructionInput, require_harmonic: bool):
    inp.g.require_valid(inp.harmonic_max if require_harmonic else None)


def integrate(inp: ReconstructionInput, order: str = "row-first", require_harmonic: bool = True,
              substeps: int = DEFAULT_SUBSTEPS) -> ReconstructedSurface:
    """Reconstruct (zeta, x3) on the whole grid, plus eta and the conformal factor.

    Each grid cell is crossed with ``substeps`` classical RK4 steps.
    """
    _check_input(inp, require_harmonic)
    zeta, x3 = _run(inp, order, substeps)
    grid = inp.g.grid
    g = grid.values
    gz = grid.derivatives()[0]
    eta = eta_of(inp.params, g, gz, zeta)
    lam = conformal_factor_of(inp.params, g, gz, zeta)
    return ReconstructedSurface(inp.params, grid.u, grid.v, zeta, x3, eta, lam, inp.g, inp.basepoint, order)


def integrability_residual(inp: ReconstructionInput, require_harmonic: bool = False,
                          substeps: int = DEFAULT_SUBSTEPS) -> float:
    """max |zeta(row-first) - zeta(column-first)| over the grid.

    Harmonicity is not required by default: detecting non-integrable input is
    the point of this certificate.
    """
    _check_input(inp, require_harmonic)
    za, _ = _run(inp, "row-first", substeps)
    zb, _ = _run(inp, "column-first", substeps)
    return float(np.max(np.abs(za - zb)))


def gauss_of_immersion(params: ModelParams, u, v, zeta, x3, orient: str = "up") -> np.ndarray:
    """Gauss map of a sampled immersion via finite-difference X_z and the frame normal.

    ``orient="cross"`` keeps the normal of the parametrization instead of the upward one.
    """
    from .diagnostics import immersion_frame
    from .gauss import gauss_from_normal

    if params.c <= 0:
        raise DomainError("gauss_of_immersion needs kappa < 0")
    frame = immersion_frame(params, u, v, zeta, x3, orient=orient)
    if np.any(frame.lam <= 0):
        raise DegenerateInputError("immersion degenerates (lambda <= 0) at some node")
    return gauss_from_normal(params, zeta, frame.N, unit_tol=np.inf)
