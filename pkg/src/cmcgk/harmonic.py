"""Complex grids, Wirtinger calculus and harmonic maps into the hyperbolic disk.

A map g: Sigma -> D is harmonic for 4|dw|^2 / (1 - |w|^2)^2 when

    (1 - |g|^2) g_{z zbar} + 2 conj(g) g_z g_{zbar} = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import stencils
from .errors import DegenerateInputError, DomainError

__all__ = [
    "ComplexGrid",
    "HarmonicMap",
    "rectangle_axes",
    "wirtinger",
    "harmonic_residual",
    "hopf_Q",
    "energy_mu",
    "generate",
    "from_samples",
    "ANTIHOLOMORPHY_RATIO",
    "RESIDUAL_MARGIN",
]

ANTIHOLOMORPHY_RATIO = 1e-10
RESIDUAL_MARGIN = 2

# sampler(z) -> (g, g_z, g_zbar, g_{z zbar}) evaluated at complex points z
Sampler = Callable[[np.ndarray], tuple]


def rectangle_axes(center: complex, half_width: float, half_height: float, nu: int, nv: int):
    """Node coordinates of the rectangle centre +- (half_width, i half_height)."""
    center = complex(center)
    u = np.linspace(center.real - half_width, center.real + half_width, nu)
    v = np.linspace(center.imag - half_height, center.imag + half_height, nv)
    return u, v


@dataclass
class ComplexGrid:
    """Complex samples f[i, j] = f(u[i] + i v[j]) on a regular rectangle.

    In ``"exact"`` mode the analytic derivatives come from ``sampler``; in
    ``"fd"`` mode they are computed with fourth-order stencils.
    """

    u: np.ndarray
    v: np.ndarray
    values: np.ndarray
    mode: str = "fd"
    sampler: Sampler | None = field(default=None, repr=False)
    _exact: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.u.size, self.v.size):
            raise ValueError("values must have shape (len(u), len(v))")
        for n in self.values.shape:
            if n < stencils.MIN_NODES:
                raise ValueError(f"grid too small: need at least {stencils.MIN_NODES} nodes per axis")
        if self.mode not in ("exact", "fd"):
            raise ValueError(f"unknown derivative mode {self.mode!r}")
        if self.mode == "exact" and self.sampler is None:
            raise ValueError("exact mode needs an analytic sampler")

    @classmethod
    def from_sampler(cls, u, v, sampler: Sampler) -> "ComplexGrid":
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        Z = u[:, None] + 1j * v[None, :]
        out = tuple(np.broadcast_to(np.asarray(a, dtype=complex), Z.shape).copy() for a in sampler(Z))
        grid = cls(u, v, out[0], mode="exact", sampler=sampler)
        grid._exact = out
        return grid

    @property
    def shape(self):
        return self.values.shape

    @property
    def hu(self) -> float:
        return float(self.u[1] - self.u[0])

    @property
    def hv(self) -> float:
        return float(self.v[1] - self.v[0])

    @property
    def z(self) -> np.ndarray:
        return self.u[:, None] + 1j * self.v[None, :]

    def fd_derivatives(self):
        """(f_z, f_zbar, f_{z zbar}) from stencils, regardless of mode."""
        fz, fzb = stencils.wirtinger(self.values, self.hu, self.hv)
        return fz, fzb, stencils.laplacian_quarter(self.values, self.hu, self.hv)

    def derivatives(self):
        """(f_z, f_zbar, f_{z zbar}) in the grid's own derivative mode."""
        if self.mode == "exact":
            return self._exact[1], self._exact[2], self._exact[3]
        return self.fd_derivatives()

    def line_fields(self, axis: int, substeps: int = 1):
        """Values and z-derivatives at the fractional points k + q / (2 substeps) along ``axis``.

        Returns two lists indexed by q = 1 .. 2 substeps - 1, each entry shaped
        like the grid with one fewer node along ``axis``.  Exact mode evaluates
        the sampler; finite-difference mode interpolates along the line (cubic
        at midpoints, quintic elsewhere).
        """
        fracs = [q / (2 * substeps) for q in range(1, 2 * substeps)]
        if self.mode == "exact":
            Z = self.z
            lo, hi = (Z[:-1], Z[1:]) if axis == 0 else (Z[:, :-1], Z[:, 1:])
            gs, gzs = [], []
            for t in fracs:
                Zt = (1 - t) * lo + t * hi
                g, gz, *_ = self.sampler(Zt)
                gs.append(np.broadcast_to(np.asarray(g, dtype=complex), Zt.shape))
                gzs.append(np.broadcast_to(np.asarray(gz, dtype=complex), Zt.shape))
            return gs, gzs
        gz = self.derivatives()[0]
        if substeps == 1:
            return [stencils.midpoints(self.values, axis)], [stencils.midpoints(gz, axis)]
        return ([stencils.interpolate(self.values, axis, t) for t in fracs],
                [stencils.interpolate(gz, axis, t) for t in fracs])

    def check_consistency(self, n_nodes: int = 10, rtol: float = 1e-4, seed: int = 0) -> float:
        """Compare exact derivatives with stencils at random interior nodes; returns the worst relative error."""
        if self.mode != "exact":
            return 0.0
        rng = np.random.default_rng(seed)
        nu, nv = self.shape
        ii = rng.integers(2, nu - 2, size=n_nodes)
        jj = rng.integers(2, nv - 2, size=n_nodes)
        worst = 0.0
        for exact, approx in zip(self.derivatives(), self.fd_derivatives()):
            scale = max(float(np.max(np.abs(exact))), 1.0)
            worst = max(worst, float(np.max(np.abs(exact[ii, jj] - approx[ii, jj]))) / scale)
        if worst > rtol:
            raise DegenerateInputError(
                f"analytic derivatives disagree with stencils (relative error {worst:.2e} > {rtol:g})"
            )
        return worst


def wirtinger(grid: ComplexGrid):
    """Finite-difference Wirtinger derivatives (f_z, f_zbar) of a grid."""
    return stencils.wirtinger(grid.values, grid.hu, grid.hv)


def _require_disk(g: np.ndarray):
    m = float(np.max(np.abs(g)))
    if not m < 1.0:
        raise DomainError(f"map leaves the unit disk (max |g| = {m:.6g})")


def harmonic_residual(grid: ComplexGrid) -> np.ndarray:
    """|(1 - |g|^2) g_{z zbar} + 2 conj(g) g_z g_zbar| at every node."""
    g = grid.values
    _require_disk(g)
    gz, gzb, gzzb = grid.derivatives()
    return np.abs((1 - np.abs(g) ** 2) * gzzb + 2 * np.conj(g) * gz * gzb)


def hopf_Q(grid: ComplexGrid) -> np.ndarray:
    """Hopf differential coefficient Q(g) = 4 g_z conj(g)_z / (1 - |g|^2)^2."""
    g = grid.values
    _require_disk(g)
    gz, gzb, _ = grid.derivatives()
    # (conj g)_z = conj(g_zbar)
    return 4 * gz * np.conj(gzb) / (1 - np.abs(g) ** 2) ** 2


def energy_mu(grid: ComplexGrid) -> np.ndarray:
    """Energy density mu(g) = 4 (|g_z|^2 + |g_zbar|^2) / (1 - |g|^2)^2."""
    g = grid.values
    _require_disk(g)
    gz, gzb, _ = grid.derivatives()
    return 4 * (np.abs(gz) ** 2 + np.abs(gzb) ** 2) / (1 - np.abs(g) ** 2) ** 2


@dataclass
class HarmonicMap:
    """A grid map into the unit disk with its harmonicity report."""

    grid: ComplexGrid
    max_residual: float
    mean_residual: float
    min_abs_gz: float
    max_abs_gz: float
    max_abs_g: float
    label: str = ""

    @classmethod
    def from_grid(cls, grid: ComplexGrid, label: str = "", margin: int = RESIDUAL_MARGIN) -> "HarmonicMap":
        res = stencils.interior(harmonic_residual(grid), margin)
        gz = np.abs(grid.derivatives()[0])
        return cls(
            grid=grid,
            max_residual=float(np.max(res)),
            mean_residual=float(np.mean(res)),
            min_abs_gz=float(np.min(gz)),
            max_abs_gz=float(np.max(gz)),
            max_abs_g=float(np.max(np.abs(grid.values))),
            label=label,
        )

    @property
    def antiholomorphic_somewhere(self) -> bool:
        # a g_z at round-off level (constant maps under stencils) counts as vanishing
        noise = 1e3 * np.finfo(float).eps * max(self.max_abs_g, 1e-300) / min(self.grid.hu, self.grid.hv)
        if not self.max_abs_gz > noise:
            return True
        return not self.min_abs_gz > ANTIHOLOMORPHY_RATIO * self.max_abs_gz

    def require_valid(self, harmonic_max: float | None = None) -> None:
        """Raise unless the map is nowhere antiholomorphic (and harmonic, if a bound is given)."""
        if self.antiholomorphic_somewhere:
            raise DegenerateInputError(
                f"g is antiholomorphic somewhere (min |g_z| = {self.min_abs_gz:.3e}, "
                f"max |g_z| = {self.max_abs_gz:.3e})"
            )
        if harmonic_max is not None and not self.max_residual <= harmonic_max:
            raise DegenerateInputError(
                f"g is not harmonic: max residual {self.max_residual:.3e} exceeds {harmonic_max:.3e}"
            )

    def report(self) -> dict:
        return {
            "label": self.label,
            "mode": self.grid.mode,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "min_abs_gz": self.min_abs_gz,
            "max_abs_g": self.max_abs_g,
        }


# ---------------------------------------------------------------- generators


def _identity_sampler(Z):
    one = np.ones_like(Z)
    zero = np.zeros_like(Z)
    return Z, one, zero, zero


def _tanh_sampler(a: float, angle: float, rotation: float) -> Sampler:
    """g = exp(i rotation) tanh(a Re(exp(-i angle) z)); its image is a diameter of the disk."""
    ez = np.exp(-1j * angle)
    rot = np.exp(1j * rotation)

    def sampler(Z):
        s = np.real(ez * Z)
        t = np.tanh(a * s)
        d = a * (1 - t * t)
        return (
            rot * t,
            rot * d * ez / 2,
            rot * d * np.conj(ez) / 2,
            rot * (-2 * a * a * t * (1 - t * t)) / 4,
        )

    return sampler


def _expression_sampler(expression: str, allow_zbar: bool) -> Sampler:
    """Exact Wirtinger derivatives of an expression in the symbols z and zb (= conj z)."""
    import sympy as sp

    z, zb = sp.symbols("z zb")
    names = {"z": z, "zb": zb, "I": sp.I, "i": sp.I, "pi": sp.pi, "E": sp.E}
    try:
        expr = sp.parse_expr(expression, local_dict=names, transformations="all")
    except Exception as exc:
        raise ValueError(f"cannot parse gauss map expression {expression!r}: {exc}") from exc
    extra = expr.free_symbols - {z, zb}
    if extra:
        raise ValueError(f"unknown symbols in expression: {sorted(map(str, extra))}")
    if zb in expr.free_symbols and not allow_zbar:
        raise ValueError("a holomorphic expression may not depend on zb")
    parts = [expr, sp.diff(expr, z), sp.diff(expr, zb), sp.diff(expr, z, zb)]
    funcs = [sp.lambdify((z, zb), p, modules="numpy") for p in parts]

    def sampler(Z):
        Z = np.asarray(Z, dtype=complex)
        return tuple(np.broadcast_to(np.asarray(f(Z, np.conj(Z)), dtype=complex), Z.shape) for f in funcs)

    return sampler


def generate(kind: str, u, v, **params) -> HarmonicMap:
    """Exact-mode test maps on the grid u x v.

    kinds: ``identity``; ``holomorphic`` (``expression`` in z); ``geodesic_tanh``
    (``a``, optional ``angle`` of the parameter direction and ``rotation`` of the
    image diameter); ``expression`` (any expression in z and zb, harmonic or not).
    """
    if kind == "identity":
        sampler = _identity_sampler
    elif kind == "geodesic_tanh":
        sampler = _tanh_sampler(float(params.get("a", 0.7)), float(params.get("angle", 0.0)),
                                float(params.get("rotation", 0.0)))
    elif kind == "holomorphic":
        sampler = _expression_sampler(params["expression"], allow_zbar=False)
    elif kind == "expression":
        sampler = _expression_sampler(params["expression"], allow_zbar=True)
    else:
        raise ValueError(f"unknown gauss map kind {kind!r}")
    grid = ComplexGrid.from_sampler(u, v, sampler)
    _require_disk(grid.values)
    grid.check_consistency()
    label = kind if "expression" not in params else f"{kind}({params['expression']})"
    return HarmonicMap.from_grid(grid, label=label)


def from_samples(u, v, values, label: str = "sampled") -> HarmonicMap:
    """Finite-difference-mode map from nodal samples."""
    grid = ComplexGrid(u, v, values, mode="fd")
    _require_disk(grid.values)
    return HarmonicMap.from_grid(grid, label=label)
