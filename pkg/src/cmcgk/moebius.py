"""SU(1,1) actions on the Riemann sphere and on H^2(kappa), and isometries of E(kappa, tau)."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import DomainError, IntegrationToleranceError
from .model import (
    AmbientPoint,
    ModelParams,
    check_in_disk,
    conformal_factor,
    coordinates_to_frame,
    frame_to_coordinates,
    metric_tensor,
)

INFINITY = complex(math.inf, 0.0)

__all__ = [
    "INFINITY",
    "is_infinite",
    "SU11Matrix",
    "psi",
    "phi",
    "phi_derivative",
    "vertical_form",
    "AmbientIsometry",
    "vertical_translation",
    "axis_rotation",
    "lift_isometry",
    "rotation_r",
    "rotation_r_frame",
    "pullback_residual",
]


def is_infinite(w) -> np.ndarray | bool:
    return np.isinf(np.real(w)) | np.isinf(np.imag(w))


@dataclass(frozen=True)
class SU11Matrix:
    """The matrix [[alpha, beta], [conj(beta), conj(alpha)]] with |alpha|^2 - |beta|^2 = 1."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        det = abs(self.alpha) ** 2 - abs(self.beta) ** 2
        scale = max(1.0, abs(self.alpha) ** 2)
        if abs(det - 1.0) > 1e-12 * scale:
            raise DomainError(f"not in SU(1,1): |alpha|^2 - |beta|^2 = {det!r}")

    @classmethod
    def identity(cls) -> "SU11Matrix":
        return cls(1.0 + 0j, 0j)

    @classmethod
    def rotation(cls, angle: float) -> "SU11Matrix":
        """psi acts as w -> exp(i angle) w."""
        return cls(cmath.exp(0.5j * angle), 0j)

    @classmethod
    def normalized(cls, alpha: complex, beta: complex) -> "SU11Matrix":
        """Rescale (alpha, beta) onto SU(1,1); requires |alpha| > |beta|."""
        d = abs(alpha) ** 2 - abs(beta) ** 2
        if d <= 0:
            raise DomainError("need |alpha| > |beta|")
        s = math.sqrt(d)
        return cls(complex(alpha) / s, complex(beta) / s)

    @classmethod
    def moving_to_origin(cls, w: complex, c: float) -> "SU11Matrix":
        """Matrix whose phi sends w to 0 (beta = -alpha c w)."""
        if c * abs(w) >= 1:
            raise DomainError("w must lie in the disk |w| < 1/c")
        alpha = 1.0 / math.sqrt(1.0 - (c * abs(w)) ** 2)
        return cls(complex(alpha), complex(-alpha * c * w))

    @classmethod
    def random(cls, rng: np.random.Generator, max_beta: float = 1.0) -> "SU11Matrix":
        r = max_beta * rng.random()
        a, b = rng.uniform(0, 2 * math.pi, size=2)
        return cls(math.sqrt(1 + r * r) * cmath.exp(1j * a), r * cmath.exp(1j * b))

    def __matmul__(self, other: "SU11Matrix") -> "SU11Matrix":
        a1, b1, a2, b2 = self.alpha, self.beta, other.alpha, other.beta
        return SU11Matrix(a1 * a2 + b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())

    def inverse(self) -> "SU11Matrix":
        return SU11Matrix(self.alpha.conjugate(), -self.beta)

    def as_array(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta], [self.beta.conjugate(), self.alpha.conjugate()]])


def psi(M: SU11Matrix, w):
    """Action on the Riemann sphere, w -> (alpha w + beta) / (conj(beta) w + conj(alpha)).

    Infinity is ``INFINITY`` (any complex with an infinite part) on input and output.
    """
    a, b = M.alpha, M.beta
    w_arr = np.asarray(w, dtype=complex)
    inf = is_infinite(w_arr)
    w_fin = np.where(inf, 0.0, w_arr)
    num = np.where(inf, a, a * w_fin + b)
    den = np.where(inf, b.conjugate(), b.conjugate() * w_fin + a.conjugate())
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den == 0, INFINITY, num / np.where(den == 0, 1.0, den))
    return complex(out) if np.ndim(out) == 0 else out


def phi(M: SU11Matrix, zeta, c: float):
    """Isometry of H^2(kappa): zeta -> (1/c) (alpha c zeta + beta) / (conj(beta) c zeta + conj(alpha))."""
    if c <= 0:
        raise DomainError("phi needs kappa < 0")
    check_in_disk_c(c, zeta)
    a, b = M.alpha, M.beta
    z = np.asarray(zeta, dtype=complex)
    out = (a * c * z + b) / (c * (b.conjugate() * c * z + a.conjugate()))
    return complex(out) if np.ndim(out) == 0 else out


def phi_derivative(M: SU11Matrix, zeta, c: float):
    """Complex derivative of :func:`phi`, 1 / (conj(beta) c zeta + conj(alpha))^2."""
    z = np.asarray(zeta, dtype=complex)
    out = 1.0 / (M.beta.conjugate() * c * z + M.alpha.conjugate()) ** 2
    return complex(out) if np.ndim(out) == 0 else out


def check_in_disk_c(c: float, zeta) -> None:
    if np.any(c * np.abs(zeta) >= 1):
        raise DomainError("zeta outside the disk |zeta| < 1/c")


def vertical_form(params: ModelParams, zeta, dzeta):
    """tau Lambda (x2 dx1 - x1 dx2) evaluated on the horizontal displacement dzeta."""
    lam = conformal_factor(params, zeta)
    return -params.tau * lam * np.imag(np.conj(zeta) * dzeta)


@dataclass
class AmbientIsometry:
    """An isometry of E(kappa, tau) together with its horizontal SU(1,1) matrix.

    ``kind`` is one of ``"vertical_translation"``, ``"rotation"``, ``"lift"``
    or ``"pi_rotation"``.  For lifts the vertical offset h(zeta) is obtained by
    integrating the exact 1-form dh = b - phi_M^* b (b the connection form of
    the fibration) along the chord from ``anchor``; h(anchor) = 0.
    """

    params: ModelParams
    kind: str
    matrix: SU11Matrix | None = None
    shift: float = 0.0
    anchor: complex = 0j
    quad_tol: float = 1e-12
    _cache: dict = field(default_factory=dict, repr=False)

    def horizontal(self, zeta):
        if self.kind == "vertical_translation":
            return zeta
        if self.kind == "pi_rotation":
            return np.conj(zeta)
        if self.kind == "rotation":
            return (self.matrix.alpha / self.matrix.alpha.conjugate()) * np.asarray(zeta)
        return phi(self.matrix, zeta, self.params.c)

    def horizontal_derivative(self, zeta):
        if self.kind == "vertical_translation":
            return np.ones_like(np.asarray(zeta, dtype=complex))
        if self.kind == "rotation":
            return (self.matrix.alpha / self.matrix.alpha.conjugate()) * np.ones_like(
                np.asarray(zeta, dtype=complex)
            )
        return phi_derivative(self.matrix, zeta, self.params.c)

    def dh(self, zeta, dzeta):
        """Differential of the vertical offset applied to dzeta."""
        if self.kind in ("vertical_translation", "rotation"):
            return np.zeros(np.broadcast(zeta, dzeta).shape)
        image = self.horizontal(zeta)
        pushed = self.horizontal_derivative(zeta) * dzeta
        return vertical_form(self.params, zeta, dzeta) - vertical_form(self.params, image, pushed)

    def offset(self, zeta: complex) -> float:
        """Vertical offset h(zeta) with f(zeta, x3) = (phi(zeta), x3 + h(zeta))."""
        if self.kind == "vertical_translation":
            return self.shift
        if self.kind == "rotation":
            return 0.0
        zeta = complex(zeta)
        if zeta in self._cache:
            return self._cache[zeta]
        a = complex(self.anchor)
        chord = zeta - a

        def integrand(t):
            return float(self.dh(a + t * chord, chord))

        val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=self.quad_tol, epsrel=self.quad_tol, limit=200)
        if not math.isfinite(val) or err > 100 * self.quad_tol * max(1.0, abs(val)):
            raise IntegrationToleranceError(
                f"vertical offset quadrature did not converge (estimated error {err:.2e})",
                detail={"achieved": err},
            )
        self._cache[zeta] = val + self.shift
        return val + self.shift

    def __call__(self, p: AmbientPoint) -> AmbientPoint:
        if self.kind == "pi_rotation":
            return rotation_r(p)
        return AmbientPoint.from_zeta(self.horizontal(p.zeta), p.x3 + self.offset(p.zeta))

    def push_frame(self, p: AmbientPoint, Z):
        """Frame components at f(p) of df(Z), Z given by frame components at p."""
        Z1, Z2, Z3 = Z
        if self.kind == "pi_rotation":
            return rotation_r_frame(Z1, Z2, Z3)
        zeta = p.zeta
        a1, a2, a3 = frame_to_coordinates(self.params, zeta, Z1, Z2, Z3)
        dzeta = a1 + 1j * a2
        image = self.horizontal(zeta)
        dimage = self.horizontal_derivative(zeta) * dzeta
        b3 = a3 + self.dh(zeta, dzeta)
        return coordinates_to_frame(self.params, image, np.real(dimage), np.imag(dimage), b3)


def vertical_translation(params: ModelParams, t: float) -> AmbientIsometry:
    return AmbientIsometry(params, "vertical_translation", SU11Matrix.identity(), shift=float(t))


def axis_rotation(params: ModelParams, angle: float) -> AmbientIsometry:
    """Rotation of the given angle about the x3-axis."""
    return AmbientIsometry(params, "rotation", SU11Matrix.rotation(angle))


def lift_isometry(params: ModelParams, M: SU11Matrix, anchor: AmbientPoint | complex = 0j) -> AmbientIsometry:
    """Isometry with horizontal part phi_M, normalised so the anchor keeps its height."""
    if params.c <= 0:
        raise DomainError("lifts of SU(1,1) isometries need kappa < 0")
    a = anchor.zeta if isinstance(anchor, AmbientPoint) else complex(anchor)
    check_in_disk(params, a, "anchor")
    return AmbientIsometry(params, "lift", M, anchor=a)


def rotation_r(p: AmbientPoint) -> AmbientPoint:
    """Rotation of angle pi about the x1-axis: (x1, x2, x3) -> (x1, -x2, -x3)."""
    return AmbientPoint(p.x1, -p.x2, -p.x3)


def rotation_r_frame(Z1, Z2, Z3):
    """Differential of r on frame components."""
    return Z1, -np.asarray(Z2) * 1.0, -np.asarray(Z3) * 1.0


def pullback_residual(iso: AmbientIsometry, p: AmbientPoint, step: float = 1e-5) -> float:
    """max |J^T g(f(p)) J - g(p)| / max|g(p)| with J from central differences."""
    base = np.array([p.x1, p.x2, p.x3])
    J = np.empty((3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = step
        fp = iso(AmbientPoint(*(base + e)))
        fm = iso(AmbientPoint(*(base - e)))
        J[:, k] = (np.array([fp.x1, fp.x2, fp.x3]) - np.array([fm.x1, fm.x2, fm.x3])) / (2 * step)
    q = iso(p)
    g_img = metric_tensor(iso.params, q.zeta)
    g_src = metric_tensor(iso.params, p.zeta)
    return float(np.max(np.abs(J.T @ g_img @ J - g_src)) / np.max(np.abs(g_src)))
