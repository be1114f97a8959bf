"""Sister correspondence between critical CMC surfaces and minimal surfaces in Nil(tau-hat).

Only the pointwise relations between the data (g, eta, zeta) of a critical
surface and (g-hat, eta-hat) of its sister are evaluated here; the sister
immersion itself is never built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import stencils
from .errors import DegenerateInputError, DomainError
from .gauss import auxiliary_from_gauss
from .harmonic import HarmonicMap, energy_mu, hopf_Q
from .model import ModelParams
from .weierstrass import eta_of

__all__ = [
    "SisterPair",
    "RevolutionSample",
    "nil_eta",
    "zeta_algebraic",
    "associate_checks",
    "example_revolution",
    "phase_identity_residual",
    "SOLVE_TOL",
    "CHECK_MARGIN",
]

SOLVE_TOL = 1e-12
CHECK_MARGIN = 2


def _unit_disk(g, name):
    if np.any(np.abs(g) >= 1):
        raise DomainError(f"{name} must take values in the unit disk")


def nil_eta(params: ModelParams, g_hat, g_hat_z):
    """eta-hat of the sister minimal surface: (4i / tau_hat) conj(g_hat) g_hat_z / (1 - |g_hat|^2)^2."""
    g_hat = np.asarray(g_hat, dtype=complex)
    _unit_disk(g_hat, "g_hat")
    return 4j / params.tau_hat * np.conj(g_hat) * g_hat_z / (1 - np.abs(g_hat) ** 2) ** 2


def zeta_algebraic(params: ModelParams, g, g_z, g_hat, g_hat_z, tol: float = SOLVE_TOL):
    """zeta recovered pointwise from both Gauss maps, with no integration.

    The associate relation is linear-fractional in conj(zeta); nodes where its
    denominator falls below ``tol`` raise :class:`DegenerateInputError`.
    """
    c = params.c
    if c <= 0:
        raise DomainError("zeta_algebraic needs kappa < 0")
    g = np.asarray(g, dtype=complex)
    g_hat = np.asarray(g_hat, dtype=complex)
    _unit_disk(g, "g")
    _unit_disk(g_hat, "g_hat")
    L = g_z / (1 - np.abs(g) ** 2)
    R = np.exp(-2j * params.theta) * g_hat_z * np.conj(g_hat) / (1 - np.abs(g_hat) ** 2)
    den = L - R * g
    small = np.abs(den) < tol
    if np.any(small):
        k = int(np.flatnonzero(np.ravel(small))[0])
        raise DegenerateInputError(f"degenerate solve for zeta at flat index {k} (|det| < {tol:g})")
    zeta = np.conj((L * np.conj(g) - R) / (c * den))
    if np.any(c * np.abs(zeta) >= 1):
        raise DomainError("recovered zeta leaves the disk |zeta| < 1/c")
    return zeta


@dataclass
class SisterPair:
    """Gauss maps of a critical surface and of its candidate sister on a common grid."""

    params: ModelParams
    g: HarmonicMap
    g_hat: HarmonicMap
    zeta: np.ndarray | None = None
    eta: np.ndarray = field(init=False)
    eta_hat: np.ndarray = field(init=False)

    def __post_init__(self):
        a, b = self.g.grid, self.g_hat.grid
        if a.shape != b.shape or not (np.allclose(a.u, b.u) and np.allclose(a.v, b.v)):
            raise ValueError("g and g_hat must live on the same grid")
        gz = a.derivatives()[0]
        ghz = b.derivatives()[0]
        if self.zeta is None:
            self.zeta = zeta_algebraic(self.params, a.values, gz, b.values, ghz)
        self.eta = eta_of(self.params, a.values, gz, self.zeta)
        self.eta_hat = nil_eta(self.params, b.values, ghz)


def associate_checks(pair: SisterPair, margin: int = CHECK_MARGIN) -> dict:
    """Maximum residuals of the pointwise sister relations.

    Every compared quantity is invariant under rotating g_hat about the origin,
    so the rotation freedom of g_hat needs no fitting.
    """
    p = pair.params
    a, b = pair.g.grid, pair.g_hat.grid
    g, gh = a.values, b.values
    gz, gzb, _ = a.derivatives()
    hz, hzb, _ = b.derivatives()
    wg = 1 - np.abs(g) ** 2
    wh = 1 - np.abs(gh) ** 2
    G = auxiliary_from_gauss(p, g, pair.zeta)
    rot = np.exp(-2j * p.theta)
    fields = {
        "abs_G": np.abs(G) - np.abs(gh),
        "modulus1": np.abs(gz) / wg - np.abs(hz) / wh,
        "modulus2": np.abs(gzb) / wg - np.abs(hzb) / wh,
        "Q_phase": hopf_Q(a) - rot * hopf_Q(b),
        "mu": energy_mu(a) - energy_mu(b),
        "eta_phase": pair.eta - np.exp(-1j * p.theta) * pair.eta_hat,
    }
    return {k: float(np.max(np.abs(stencils.interior(v, margin)))) for k, v in fields.items()}


class RevolutionSample(NamedTuple):
    zeta: np.ndarray
    x3: np.ndarray
    eta: np.ndarray
    limit_branch: bool


def example_revolution(params: ModelParams, z) -> RevolutionSample:
    """Closed-form rotational critical surface whose Gauss map is g(z) = z.

    For tau = 0 the arctangent term carries a zero coefficient and sin(2 theta)
    vanishes; that case uses the limit x3 = 2 / (c (1 - |z|^2)) and sets
    ``limit_branch``.
    """
    c, tau, theta = params.c, params.tau, params.theta
    if c <= 0:
        raise DomainError("the revolution example needs kappa < 0")
    z = np.asarray(z, dtype=complex)
    r2 = np.abs(z) ** 2
    if np.any(r2 >= 1):
        raise DomainError("the revolution example is defined on |z| < 1")
    e2 = np.exp(2j * theta)
    zeta = (e2 - 1) / c * z / (e2 * r2 - 1)
    limit = tau == 0
    x3 = 2 / (c * (1 - r2))
    if not limit:
        x3 = x3 - tau / c**2 * np.arctan((r2 - np.cos(2 * theta)) / np.sin(2 * theta))
    eta = 4j / (tau + 1j * c) * np.conj(z) / (1 - r2) ** 2
    return RevolutionSample(zeta, x3, eta, limit)


def phase_identity_residual(params: ModelParams) -> float:
    """|(1 - e^{2i theta})(1 - e^{-2i theta}) - 4c^2 / (tau^2 + c^2)|."""
    e2 = np.exp(2j * params.theta)
    lhs = (1 - e2) * (1 - np.conj(e2))
    return float(abs(lhs - 4 * params.c**2 / (params.tau**2 + params.c**2)))
