"""The geometric Gauss map of surfaces in E(kappa, tau).

Values live on the Riemann sphere with the unit circle as marked equator:
|g| < 1 for upward normals, |g| = 1 for horizontal ones, |g| > 1 (or infinity)
for downward ones.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .model import ModelParams, check_in_disk, hyperboloid_differential, hyperboloid_embed
from .moebius import INFINITY, is_infinite

__all__ = [
    "GaussData",
    "projector_Pi",
    "gauss_from_normal",
    "auxiliary_from_gauss",
    "gauss_from_auxiliary",
    "normal_from_auxiliary",
    "disk_to_hyperboloid",
    "lorentz_gauss",
    "classify",
    "EQUATOR_BAND",
]

EQUATOR_BAND = 1e-10


class GaussData:
    """Gauss map value g, frame-dependent auxiliary value G and, if defined, g-tilde."""

    __slots__ = ("g", "G", "g_tilde")

    def __init__(self, g, G, g_tilde=None):
        self.g = g
        self.G = G
        self.g_tilde = g_tilde

    @classmethod
    def from_normal(cls, params: ModelParams, zeta, N) -> "GaussData":
        g = gauss_from_normal(params, zeta, N)
        G = auxiliary_from_gauss(params, g, zeta)
        g_tilde = lorentz_gauss(params, zeta, N) if params.c > 0 and N[2] > 0 else None
        return cls(g, G, g_tilde)

    def __repr__(self):
        return f"GaussData(g={self.g!r}, |G|={np.abs(self.G)!r})"


def _mobius(a, b, c, d, w):
    """(a w + b) / (c w + d) on the extended plane, elementwise."""
    w = np.asarray(w, dtype=complex)
    a, b, c, d = np.broadcast_arrays(*(np.asarray(x, dtype=complex) for x in (a, b, c, d)))
    inf = is_infinite(w)
    wf = np.where(inf, 0.0, w)
    num = np.where(inf, a, a * wf + b)
    den = np.where(inf, c, c * wf + d)
    zero = den == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(zero, INFINITY, num / np.where(zero, 1.0, den))
    return complex(out) if out.ndim == 0 else out


def _check_unit(Z1, Z2, Z3, tol):
    n2 = np.asarray(Z1) ** 2 + np.asarray(Z2) ** 2 + np.asarray(Z3) ** 2
    if np.any(np.abs(n2 - 1.0) > tol):
        raise DomainError(f"expected a unit vector, |Z|^2 - 1 up to {np.max(np.abs(n2 - 1.0)):.2e}")


def projector_Pi(params: ModelParams, zeta, Z, unit_tol: float = 1e-10):
    """Pi_x(Z) for Z = (Z1, Z2, Z3) in the frame at a point over zeta.

    (Z1 + i Z2 + c zeta (1 + Z3)) / (c conj(zeta) (Z1 + i Z2) + 1 + Z3); x3 plays no role.
    """
    Z1, Z2, Z3 = Z
    _check_unit(Z1, Z2, Z3, unit_tol)
    check_in_disk(params, zeta)
    c = params.c
    zeta = np.asarray(zeta, dtype=complex)
    s = np.asarray(Z1) + 1j * np.asarray(Z2)
    num = s + c * zeta * (1 + np.asarray(Z3))
    den = c * np.conj(zeta) * s + 1 + np.asarray(Z3)
    zero = den == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(zero, INFINITY, num / np.where(zero, 1.0, den))
    return complex(out) if out.ndim == 0 else out


def gauss_from_normal(params: ModelParams, zeta, N, unit_tol: float = 1e-10):
    """Gauss map g = Pi(N) from the frame components of the unit normal."""
    return projector_Pi(params, zeta, N, unit_tol=unit_tol)


def auxiliary_from_gauss(params: ModelParams, g, zeta):
    """G = (g - c zeta) / (1 - c conj(zeta) g)."""
    check_in_disk(params, zeta)
    c = params.c
    zeta = np.asarray(zeta, dtype=complex)
    return _mobius(1.0, -c * zeta, -c * np.conj(zeta), 1.0, g)


def gauss_from_auxiliary(params: ModelParams, G, zeta):
    """g = (G + c zeta) / (c conj(zeta) G + 1)."""
    check_in_disk(params, zeta)
    c = params.c
    zeta = np.asarray(zeta, dtype=complex)
    return _mobius(1.0, c * zeta, c * np.conj(zeta), 1.0, G)


def normal_from_auxiliary(G):
    """Unit frame components (2 Re G, 2 Im G, 1 - |G|^2) / (1 + |G|^2); infinity -> (0, 0, -1)."""
    G = np.asarray(G, dtype=complex)
    inf = is_infinite(G)
    Gf = np.where(inf, 0.0, G)
    m = 1.0 + np.abs(Gf) ** 2
    N1 = np.where(inf, 0.0, 2 * Gf.real / m)
    N2 = np.where(inf, 0.0, 2 * Gf.imag / m)
    N3 = np.where(inf, -1.0, (1.0 - np.abs(Gf) ** 2) / m)
    if N1.ndim == 0:
        return float(N1), float(N2), float(N3)
    return N1, N2, N3


def disk_to_hyperboloid(w):
    """Isometry F from the unit disk (curvature -1) onto the unit hyperboloid."""
    w = np.asarray(w, dtype=complex)
    r2 = np.abs(w) ** 2
    if np.any(r2 >= 1):
        raise DomainError("F is defined on the open unit disk only")
    return np.array([1 + r2, 2 * w.real, 2 * w.imag]) / (1 - r2)


def lorentz_gauss(params: ModelParams, zeta, N):
    """g-tilde = (2c X_* + N_*) / nu with X_* the hyperboloid image of zeta and N_* = d pi(N).

    Requires c > 0 and an upward normal (nu = N3 > 0).
    """
    N1, N2, N3 = (np.asarray(x, dtype=float) for x in N)
    if params.c <= 0:
        raise DomainError("the Lorentzian Gauss map needs kappa < 0")
    if np.any(N3 <= 0):
        raise DomainError("the Lorentzian Gauss map needs an upward normal (nu > 0)")
    c = params.c
    X = hyperboloid_embed(params, zeta)
    d1, d2 = hyperboloid_differential(params, zeta)
    # d pi(N) has coordinate components (N1, N2) / Lambda
    margin = 1.0 - c * c * np.abs(np.asarray(zeta)) ** 2
    Nstar = margin * (N1 * d1 + N2 * d2)
    return (2 * c * X + Nstar) / N3


def classify(g, band: float = EQUATOR_BAND):
    """'north' for |g| < 1, 'equator' for |g| = 1 (within ``band``), 'south' otherwise."""
    g = np.asarray(g, dtype=complex)
    r = np.where(is_infinite(g), np.inf, np.abs(g))
    out = np.where(np.abs(r - 1.0) < band, "equator", np.where(r < 1.0, "north", "south"))
    return str(out) if out.ndim == 0 else out
