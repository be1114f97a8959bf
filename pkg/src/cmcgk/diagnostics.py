"""Differential geometry of sampled conformal immersions into E(kappa, tau).

All quantities come from finite differences of the sampled coordinates
(zeta, x3) and the connection table of the frame (V1, V2, V3); nothing here
uses the Gauss map, so these estimates check the reconstruction independently.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import stencils
from .errors import DegenerateInputError
from .gauss import auxiliary_from_gauss, gauss_from_normal
from .model import ModelParams, conformal_factor, covariant_frame_derivative

__all__ = [
    "ImmersionFrame",
    "ImmersionJet",
    "immersion_frame",
    "frame_components",
    "jet_of",
    "A_DERIVATIVE_ORDER",
    "jet",
    "sample_surface",
    "mean_curvature",
    "hopf_P",
    "abresch_rosenberg",
    "verify_hopf_relation",
    "holomorphy_residual",
    "algebraic_residuals",
    "angle_consistency",
    "DIAGNOSTIC_MARGIN",
]

DIAGNOSTIC_MARGIN = 3
# stencil order for the derivatives of A; the corners of the test domains
# sit close to where the reconstructed zeta leaves the disk
A_DERIVATIVE_ORDER = 6


@dataclass
class ImmersionFrame:
    """First-order data: A = X_z in the frame, raw normal, and lambda = 2 <X_z, X_zbar>."""

    A: np.ndarray  # (3, nu, nv) complex
    N: np.ndarray  # (3, nu, nv) real, unit, oriented
    N_raw_norm: np.ndarray
    lam: np.ndarray
    flipped: bool


def _frame_from_A(A: np.ndarray, orient: str) -> ImmersionFrame:
    if orient not in ("up", "cross"):
        raise ValueError(f"unknown orientation rule {orient!r}")
    A1, A2, A3 = A
    lam = 2 * np.sum(np.abs(A) ** 2, axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        N = (4 / lam) * np.array([
            np.imag(A2 * np.conj(A3)),
            np.imag(A3 * np.conj(A1)),
            np.imag(A1 * np.conj(A2)),
        ])
        norm = np.sqrt(np.sum(N**2, axis=0))
        N = N / norm
    flipped = False
    if orient == "up" and np.median(N[2]) < 0:
        N = -N
        flipped = True
    return ImmersionFrame(A=A, N=N, N_raw_norm=norm, lam=lam, flipped=flipped)


def frame_components(params: ModelParams, zeta, x1z, x2z, x3z) -> np.ndarray:
    """A = X_z in the frame (V1, V2, V3) from the coordinate derivatives of X."""
    x1, x2 = np.real(zeta), np.imag(zeta)
    lam_c = conformal_factor(params, zeta)
    return np.array([lam_c * x1z, lam_c * x2z, x3z + params.tau * lam_c * (x2 * x1z - x1 * x2z)])


def immersion_frame(params: ModelParams, u, v, zeta, x3, orient: str = "up") -> ImmersionFrame:
    """X_z components and unit normal from sampled coordinates.

    ``orient="up"`` flips the normal globally when it points down on most of the
    grid; ``orient="cross"`` keeps the orientation X_z x X_zbar = i (lambda/2) N.
    """
    hu = float(u[1] - u[0])
    hv = float(v[1] - v[0])
    x1z = stencils.wirtinger(np.real(zeta), hu, hv)[0]
    x2z = stencils.wirtinger(np.imag(zeta), hu, hv)[0]
    x3z = stencils.wirtinger(np.asarray(x3, dtype=float), hu, hv)[0]
    return _frame_from_A(frame_components(params, zeta, x1z, x2z, x3z), orient)


@dataclass
class ImmersionJet:
    """Per-node frame data of a sampled immersion, with first derivatives of A."""

    params: ModelParams
    u: np.ndarray
    v: np.ndarray
    zeta: np.ndarray
    x3: np.ndarray
    A: np.ndarray
    A_z: np.ndarray
    A_zbar: np.ndarray
    N: np.ndarray
    N_raw_norm: np.ndarray
    lam: np.ndarray
    flipped: bool
    vertical: np.ndarray  # bool mask of nodes with N3 <= 0 after orientation

    @property
    def eta(self) -> np.ndarray:
        return 2 * self.A[2]

    @property
    def nu(self) -> np.ndarray:
        """Angle function N3."""
        return self.N[2]

    @property
    def gauss(self) -> np.ndarray:
        return gauss_from_normal(self.params, self.zeta, self.N, unit_tol=np.inf)


def sample_surface(fn: Callable, u, v):
    """Evaluate fn(z) -> (zeta, x3) on the grid u x v."""
    Z = np.asarray(u)[:, None] + 1j * np.asarray(v)[None, :]
    zeta, x3 = fn(Z)
    return np.broadcast_to(zeta, Z.shape).astype(complex), np.broadcast_to(x3, Z.shape).astype(float)


def _assemble(params, u, v, zeta, x3, frame: ImmersionFrame, order: int, lam_tol: float) -> ImmersionJet:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(~(frame.lam > lam_tol)):
        raise DegenerateInputError("surface is not immersed: lambda vanishes at some node")
    hu = float(u[1] - u[0])
    hv = float(v[1] - v[0])
    Az = np.empty_like(frame.A)
    Azb = np.empty_like(frame.A)
    for k in range(3):
        Az[k], Azb[k] = stencils.wirtinger(frame.A[k], hu, hv, order)
    return ImmersionJet(
        params=params, u=u, v=v, zeta=np.asarray(zeta), x3=np.asarray(x3, dtype=float),
        A=frame.A, A_z=Az, A_zbar=Azb, N=frame.N, N_raw_norm=frame.N_raw_norm,
        lam=frame.lam, flipped=frame.flipped, vertical=frame.N[2] <= 0,
    )


def jet(params: ModelParams, u, v, zeta, x3, orient: str = "up", lam_tol: float = 1e-12,
        order: int = 4) -> ImmersionJet:
    """Jet of sampled coordinates: A by differencing positions, then A_z, A_zbar with ``order``."""
    frame = immersion_frame(params, u, v, zeta, x3, orient=orient)
    return _assemble(params, u, v, zeta, x3, frame, order, lam_tol)


def jet_of(surface, orient: str = "up", source: str = "system", order: int = A_DERIVATIVE_ORDER,
           lam_tol: float = 1e-12) -> ImmersionJet:
    """Jet of a :class:`~cmcgk.weierstrass.ReconstructedSurface`.

    ``source="system"`` takes X_z from the first-order system evaluated at the
    reconstructed zeta, so only one finite-difference pass (on A) is involved;
    ``source="positions"`` differences the sampled coordinates instead.
    """
    if source == "positions":
        return jet(surface.params, surface.u, surface.v, surface.zeta, surface.x3, orient, lam_tol, order)
    if source != "system":
        raise ValueError(f"unknown jet source {source!r}")
    from .weierstrass import rhs

    params = surface.params
    grid = surface.g.grid
    zz, zzb, x3z = rhs(params, grid.values, grid.derivatives()[0], surface.zeta)
    x1z = 0.5 * (zz + np.conj(zzb))
    x2z = -0.5j * (zz - np.conj(zzb))
    frame = _frame_from_A(frame_components(params, surface.zeta, x1z, x2z, x3z), orient)
    return _assemble(params, surface.u, surface.v, surface.zeta, surface.x3, frame, order, lam_tol)


def _pair(X, Y):
    """Complex-bilinear frame pairing sum_k X_k Y_k."""
    return np.sum(X * Y, axis=0)


def mean_curvature(j: ImmersionJet, params: ModelParams | None = None, with_imag: bool = False):
    """H = (2/lambda) <nabla_{X_zbar} X_z, N>.

    The covariant derivative is assembled from the derivatives of A and the
    connection table.  The imaginary part vanishes for an exact immersion and
    is returned as a consistency residual when ``with_imag`` is set.
    """
    params = params or j.params
    nabla = covariant_frame_derivative(params, j.zeta, j.A, j.A_zbar, np.conj(j.A))
    Hc = 2 / j.lam * _pair(nabla, j.N)
    return (Hc.real, Hc.imag) if with_imag else Hc.real


def hopf_P(j: ImmersionJet, params: ModelParams | None = None) -> np.ndarray:
    """Hopf differential coefficient P = <N, nabla_{X_z} X_z>."""
    params = params or j.params
    nabla = covariant_frame_derivative(params, j.zeta, j.A, j.A_z, j.A)
    return _pair(nabla, j.N)


def abresch_rosenberg(j: ImmersionJet, params: ModelParams | None = None, P=None) -> np.ndarray:
    """Phi = 2 (c + i tau) P + (c^2 + tau^2) eta^2."""
    params = params or j.params
    c, tau = params.c, params.tau
    P = hopf_P(j, params) if P is None else P
    return 2 * (c + 1j * tau) * P + (c * c + tau * tau) * j.eta**2


def verify_hopf_relation(Q: np.ndarray, Phi: np.ndarray, margin: int = DIAGNOSTIC_MARGIN) -> float:
    """max |Q(g) + Phi| over the interior."""
    return float(np.max(np.abs(stencils.interior(Q + Phi, margin))))


def holomorphy_residual(F: np.ndarray, u, v, margin: int = DIAGNOSTIC_MARGIN) -> float:
    """max |d F / d zbar| over the interior (finite differences)."""
    hu = float(u[1] - u[0])
    hv = float(v[1] - v[0])
    return float(np.max(np.abs(stencils.interior(stencils.wirtinger(F, hu, hv)[1], margin))))


def algebraic_residuals(j: ImmersionJet, lam_ref: np.ndarray | None = None, margin: int = 2) -> dict:
    """Relative residuals of the four algebraic identities between A and N.

    ``lam_ref`` is an independent conformal factor (e.g. the closed form from
    the Gauss map); without it the first identity is compared with the jet's
    own metric and is trivially satisfied.
    """
    lam = j.lam if lam_ref is None else lam_ref
    A, N = j.A, j.N
    I = lambda a: stencils.interior(a, margin)  # noqa: E731
    sumsq = np.sum(np.abs(A) ** 2, axis=0)
    return {
        "norm": float(np.max(I(np.abs(sumsq - lam / 2) / lam))),
        "isotropy": float(np.max(I(np.abs(np.sum(A**2, axis=0)) / lam))),
        "unit_normal": float(np.max(I(np.abs(j.N_raw_norm**2 - 1)))),
        "orthogonality": float(np.max(I(np.abs(_pair(A, N)) / np.sqrt(lam)))),
    }


def angle_consistency(j: ImmersionJet, g: np.ndarray, margin: int = 2) -> float:
    """max |N3 - (1 - |G|^2)/(1 + |G|^2)| with G the auxiliary map of g."""
    G = auxiliary_from_gauss(j.params, g, j.zeta)
    a = np.abs(G) ** 2
    return float(np.max(np.abs(stencils.interior(j.N[2] - (1 - a) / (1 + a), margin))))
