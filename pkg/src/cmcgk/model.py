"""The model of E(kappa, tau) with kappa <= 0.

Points are (x1, x2, x3) in the disk D(1/c) x R (all of R^3 when kappa = 0),
with metric

    Lambda^2 (dx1^2 + dx2^2) + (tau Lambda (x2 dx1 - x1 dx2) + dx3)^2,
    Lambda = 1 / (1 - c^2 |zeta|^2),  zeta = x1 + i x2,  c = sqrt(-kappa) / 2.

Tangent vectors are carried by their components in the orthonormal frame

    V1 = (1/Lambda) d1 - tau x2 d3,  V2 = (1/Lambda) d2 + tau x1 d3,  V3 = d3.

Every function accepts scalars or numpy arrays (broadcasting applies).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "ModelParams",
    "BasePoint",
    "AmbientPoint",
    "TangentVector",
    "LorentzVector",
    "conformal_factor",
    "disk_margin",
    "check_in_disk",
    "frame_to_coordinates",
    "coordinates_to_frame",
    "metric_tensor",
    "connection_coefficients",
    "covariant_frame_derivative",
    "project",
    "minkowski",
    "hyperboloid_embed",
    "hyperboloid_differential",
]


@dataclass(frozen=True)
class ModelParams:
    """Ambient constants of E(kappa, tau)."""

    kappa: float
    tau: float

    def __post_init__(self):
        if not (math.isfinite(self.kappa) and math.isfinite(self.tau)):
            raise DomainError("kappa and tau must be finite")
        if self.kappa > 0:
            raise DomainError(f"only kappa <= 0 is supported, got kappa={self.kappa}")
        if self.kappa == 0 and self.tau == 0:
            raise DomainError("(kappa, tau) = (0, 0) is Euclidean space, which is excluded")

    @classmethod
    def from_c(cls, c: float, tau: float) -> "ModelParams":
        """Build the parameters from the critical mean curvature c instead of kappa."""
        if c < 0:
            raise DomainError("c must be non-negative")
        return cls(kappa=-4.0 * c * c, tau=tau)

    @property
    def c(self) -> float:
        """Critical mean curvature sqrt(-kappa)/2."""
        return math.sqrt(-self.kappa) / 2.0

    @property
    def tau_hat(self) -> float:
        """Bundle curvature of the Nil sister space, sqrt(tau^2 + c^2)."""
        return math.hypot(self.tau, self.c)

    @property
    def theta(self) -> float:
        """Phase with tau + i c = exp(i theta) tau_hat."""
        return math.atan2(self.c, self.tau)

    @property
    def disk_radius(self) -> float:
        return math.inf if self.c == 0 else 1.0 / self.c


@dataclass(frozen=True)
class BasePoint:
    """Point of H^2(kappa) in the disk model, with its conformal factor."""

    zeta: complex
    lambda_cap: float


@dataclass(frozen=True)
class AmbientPoint:
    x1: float
    x2: float
    x3: float

    @property
    def zeta(self) -> complex:
        return complex(self.x1, self.x2)

    @classmethod
    def from_zeta(cls, zeta: complex, x3: float = 0.0) -> "AmbientPoint":
        return cls(float(np.real(zeta)), float(np.imag(zeta)), float(x3))


@dataclass(frozen=True)
class TangentVector:
    """Tangent vector given by its components in the frame (V1, V2, V3) at ``base``."""

    Z1: float
    Z2: float
    Z3: float
    base: AmbientPoint

    def components(self) -> np.ndarray:
        return np.array([self.Z1, self.Z2, self.Z3])

    def norm(self) -> float:
        return math.sqrt(self.Z1**2 + self.Z2**2 + self.Z3**2)


@dataclass(frozen=True)
class LorentzVector:
    """Vector of Lorentz space L^3 with timelike coordinate p0."""

    p0: float
    p1: float
    p2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p0, self.p1, self.p2])

    def inner(self, other: "LorentzVector") -> float:
        return -self.p0 * other.p0 + self.p1 * other.p1 + self.p2 * other.p2


def disk_margin(params: ModelParams, zeta):
    """1 - c^2 |zeta|^2 (identically 1 when kappa = 0)."""
    return 1.0 - params.c**2 * np.abs(zeta) ** 2


def check_in_disk(params: ModelParams, zeta, what: str = "zeta") -> None:
    if params.c == 0:
        return
    margin = disk_margin(params, zeta)
    if np.any(~np.isfinite(margin)) or np.any(margin <= 0):
        worst = float(np.min(margin))
        raise DomainError(f"{what} outside the disk |zeta| < 1/c (min 1 - c^2|zeta|^2 = {worst:.3e})")


def conformal_factor(params: ModelParams, zeta):
    """Lambda = 1 / (1 - c^2 |zeta|^2)."""
    check_in_disk(params, zeta)
    lam = 1.0 / disk_margin(params, zeta)
    return float(lam) if np.ndim(lam) == 0 else lam


def frame_to_coordinates(params: ModelParams, zeta, Z1, Z2, Z3):
    """Coordinate components (a1, a2, a3) of Z1 V1 + Z2 V2 + Z3 V3 at zeta."""
    lam = conformal_factor(params, zeta)
    x1, x2 = np.real(zeta), np.imag(zeta)
    a1 = Z1 / lam
    a2 = Z2 / lam
    a3 = Z3 - params.tau * x2 * Z1 + params.tau * x1 * Z2
    return a1, a2, a3


def coordinates_to_frame(params: ModelParams, zeta, a1, a2, a3):
    """Inverse of :func:`frame_to_coordinates`; works on complex components too."""
    lam = conformal_factor(params, zeta)
    x1, x2 = np.real(zeta), np.imag(zeta)
    Z1 = lam * a1
    Z2 = lam * a2
    Z3 = a3 + params.tau * lam * (x2 * a1 - x1 * a2)
    return Z1, Z2, Z3


def metric_tensor(params: ModelParams, zeta) -> np.ndarray:
    """Coordinate metric matrix at zeta, shape (3, 3) + shape(zeta)."""
    lam = np.asarray(conformal_factor(params, zeta), dtype=float)
    x1, x2 = np.real(zeta), np.imag(zeta)
    w = np.array([params.tau * lam * x2, -params.tau * lam * x1, np.ones_like(lam)])
    g = w[:, None] * w[None, :]
    g[0, 0] = g[0, 0] + lam**2
    g[1, 1] = g[1, 1] + lam**2
    return g


def connection_coefficients(params: ModelParams, zeta) -> np.ndarray:
    """Table T with T[i, j, k] the V_k component of nabla_{V_i} V_j."""
    zeta = np.asarray(zeta)
    x1, x2 = np.real(zeta), np.imag(zeta)
    k2 = params.kappa / 2.0
    t = params.tau * np.ones_like(x1)
    zero = np.zeros_like(x1)
    T = np.zeros((3, 3, 3) + x1.shape)
    # nabla_{V1}
    T[0, 0] = [zero, k2 * x2, zero]
    T[0, 1] = [-k2 * x2, zero, t]
    T[0, 2] = [zero, -t, zero]
    # nabla_{V2}
    T[1, 0] = [zero, -k2 * x1, -t]
    T[1, 1] = [k2 * x1, zero, zero]
    T[1, 2] = [t, zero, zero]
    # nabla_{V3}
    T[2, 0] = [zero, -t, zero]
    T[2, 1] = [t, zero, zero]
    T[2, 2] = [zero, zero, zero]
    return T


def covariant_frame_derivative(params: ModelParams, zeta, Y, dY, W):
    """Frame components of nabla_W Y.

    ``Y`` holds the frame components of a vector field along a map, ``dY`` the
    derivative of those components in the direction ``W`` (also frame
    components).  Components may be complex (complexified tangent vectors).
    Arrays have the component axis first.
    """
    T = connection_coefficients(params, zeta)
    # sum_{i,j} W_i Y_j nabla_{V_i} V_j
    extra = np.einsum("i...,j...,ijk...->k...", W, Y, T)
    return np.asarray(dY) + extra


def project(params: ModelParams, p: AmbientPoint) -> BasePoint:
    """The fibration pi(x1, x2, x3) = x1 + i x2."""
    zeta = p.zeta
    return BasePoint(zeta=zeta, lambda_cap=conformal_factor(params, zeta))


def minkowski(p, q):
    """<p, q> = -p0 q0 + p1 q1 + p2 q2 along the first axis."""
    p = np.asarray(p)
    q = np.asarray(q)
    return -p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


def _require_hyperbolic(params: ModelParams):
    if params.c <= 0:
        raise DomainError("the hyperboloid model needs kappa < 0")


def hyperboloid_embed(params: ModelParams, zeta) -> np.ndarray:
    """Chart D(1/c) -> {<p,p> = 1/kappa, p0 > 0}; an isometry for Lambda^2 |dzeta|^2.

    p(zeta) = (1 + c^2|zeta|^2, 2c Re zeta, 2c Im zeta) / (2c (1 - c^2|zeta|^2)).
    """
    _require_hyperbolic(params)
    check_in_disk(params, zeta)
    c = params.c
    zeta = np.asarray(zeta, dtype=complex)
    r2 = c * c * np.abs(zeta) ** 2
    den = 2.0 * c * (1.0 - r2)
    return np.array([(1.0 + r2) / den, 2.0 * c * zeta.real / den, 2.0 * c * zeta.imag / den])


def hyperboloid_differential(params: ModelParams, zeta):
    """Partial derivatives (d p / d x1, d p / d x2) of :func:`hyperboloid_embed`."""
    _require_hyperbolic(params)
    check_in_disk(params, zeta)
    c = params.c
    zeta = np.asarray(zeta, dtype=complex)
    x1, x2 = zeta.real, zeta.imag
    D = 1.0 - c * c * (x1**2 + x2**2)
    D2 = D * D
    d1 = np.array([2 * c * x1 / D2, 1 / D + 2 * c * c * x1 * x1 / D2, 2 * c * c * x1 * x2 / D2])
    d2 = np.array([2 * c * x2 / D2, 2 * c * c * x1 * x2 / D2, 1 / D + 2 * c * c * x2 * x2 / D2])
    return d1, d2
