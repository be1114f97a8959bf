"""End-to-end runs: Gauss map in, surface plus a fully checked report out."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import diagnostics as dg
from . import harmonic as hm
from . import stencils
from . import weierstrass as ws
from .config import SceneConfig, as_dict
from .errors import ConfigError, DegenerateInputError
from .gauss import disk_to_hyperboloid, gauss_from_normal, lorentz_gauss
from .model import ModelParams
from .report import Report

__all__ = ["max_workers", "build_gauss_map", "read_samples", "write_samples", "surface_checks",
           "RunResult", "run_reconstruction", "LORENTZ_NU_MIN"]

LORENTZ_NU_MIN = 0.05


def max_workers(default: int | None = None) -> int:
    """Thread cap from CMCGK_THREADS (at least 1)."""
    raw = os.environ.get("CMCGK_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError(f"CMCGK_THREADS must be an integer, got {raw!r}") from None
    return default or min(4, os.cpu_count() or 1)


def read_samples(path: str | Path):
    """Regular-grid CSV with columns u, v, Re g, Im g (extra columns ignored).

    Returns (u, v, values) with values[i, j] = g(u[i] + i v[j]).
    """
    path = Path(path)
    try:
        with open(path) as fh:
            first = fh.readline()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    try:
        float(first.split(",")[0])
        skip = 0
    except ValueError:
        skip = 1  # header line
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    except ValueError as exc:
        raise ConfigError(f"{path}: cannot parse samples: {exc}") from exc
    if data.shape[1] < 4:
        raise ConfigError(f"{path}: expected columns u, v, Re g, Im g")
    u = np.unique(data[:, 0])
    v = np.unique(data[:, 1])
    if len(u) * len(v) != len(data):
        raise ConfigError(f"{path}: samples do not form a full regular grid")
    for axis in (u, v):
        if len(axis) < stencils.MIN_NODES or not np.allclose(np.diff(axis), axis[1] - axis[0], rtol=1e-9, atol=0):
            raise ConfigError(f"{path}: samples must lie on a regular grid with at least {stencils.MIN_NODES} nodes per axis")
    iu = np.searchsorted(u, data[:, 0])
    iv = np.searchsorted(v, data[:, 1])
    values = np.full((len(u), len(v)), np.nan + 0j)
    values[iu, iv] = data[:, 2] + 1j * data[:, 3]
    if not np.all(np.isfinite(values)):
        raise ConfigError(f"{path}: missing or non-finite samples")
    return u, v, values


def write_samples(path: str | Path, u, v, g, points=None) -> Path:
    """CSV of the grid (row-major) with Re g, Im g and optionally model coordinates."""
    U, V = np.meshgrid(u, v, indexing="ij")
    cols = [U.ravel(), V.ravel(), np.real(g).ravel(), np.imag(g).ravel()]
    header = "u,v,re_g,im_g"
    if points is not None:
        cols += [points[..., k].ravel() for k in range(3)]
        header += ",x1,x2,x3"
    path = Path(path)
    np.savetxt(path, np.column_stack(cols), delimiter=",", header=header, comments="", fmt="%.17g")
    return path


def build_gauss_map(cfg: SceneConfig, map_cfg=None) -> hm.HarmonicMap:
    """The scene's Gauss map, or the map described by ``map_cfg`` on the scene's grid."""
    map_cfg = map_cfg or cfg.gauss_map
    if map_cfg.kind == "sampled-file":
        u, v, values = read_samples(cfg.resolve(map_cfg.parameters["file"]))
        return hm.from_samples(u, v, values, label=f"sampled-file({map_cfg.parameters['file']})")
    d = cfg.domain
    u, v = hm.rectangle_axes(d.center, d.half_width, d.half_height, cfg.nu, cfg.nv)
    return hm.generate(map_cfg.kind, u, v, **map_cfg.parameters)


def surface_checks(report: Report, params: ModelParams, gm: hm.HarmonicMap, surface, tol,
                   integrability: float | None = None, prefix: str = ""):
    """Add the standard residual checks of a reconstructed critical surface.

    Returns the per-node fields used for the residual figure.
    """
    p = prefix
    report.add(f"{p}harmonic", gm.max_residual, tol.harmonic_max)
    if integrability is not None:
        report.add(f"{p}integrability", integrability, tol.integrability_max)
    j = dg.jet_of(surface)
    alg = dg.algebraic_residuals(j, lam_ref=surface.lam)
    for k in ("norm", "isotropy", "unit_normal", "orthogonality"):
        report.add(f"{p}algebraic.{k}", alg[k], tol.algebraic_max)
    H = dg.mean_curvature(j)
    dH = H - params.c
    report.add(f"{p}H-c", np.max(np.abs(stencils.interior(dH, dg.DIAGNOSTIC_MARGIN))), tol.mean_curvature_max)
    Phi = dg.abresch_rosenberg(j)
    Q = hm.hopf_Q(gm.grid)
    report.add(f"{p}Q+Phi", dg.verify_hopf_relation(Q, Phi), tol.hopf_max)
    report.add(f"{p}angle_consistency", dg.angle_consistency(j, gm.grid.values), tol.algebraic_max)
    up = j.N[2] > LORENTZ_NU_MIN
    if np.any(up):
        gj = gauss_from_normal(params, j.zeta, j.N, unit_tol=np.inf)
        gt = lorentz_gauss(params, j.zeta[up], j.N[:, up])
        F = disk_to_hyperboloid(gj[up])
        report.add(f"{p}lorentz", np.max(np.abs(F - gt) / gt[0]), tol.lorentz_max)
    report.add(f"{p}domain_margin", surface.domain_margin, tol.domain_guard, relation="ge")
    g_pos = ws.gauss_of_immersion(params, surface.u, surface.v, surface.zeta, surface.x3)
    report.add(f"{p}gauss_roundtrip", np.max(np.abs(g_pos - gm.grid.values)),
               note="Gauss map of the sampled immersion (position differences) against the input")
    if np.any(j.vertical):
        report.notes.append(f"{int(np.sum(j.vertical))} nodes have a non-upward normal")
    return {"|H - c|": dH, "|Q + Phi|": Q + Phi, "|g_immersion - g|": g_pos - gm.grid.values}


@dataclass
class RunResult:
    report: Report
    surface: object | None
    fields: dict


def run_reconstruction(cfg: SceneConfig) -> RunResult:
    """Reconstruct from a scene and check everything; aborts propagate to the caller."""
    params = ModelParams(cfg.kappa, cfg.tau)
    gm = build_gauss_map(cfg)
    report = Report("reconstruct", config=as_dict(cfg))
    report.data["gauss_map"] = gm.report()
    inp = ws.ReconstructionInput(params, gm, cfg.basepoint.z0, cfg.basepoint.zeta0, cfg.basepoint.x30,
                                 guard_min=cfg.tolerances.domain_guard,
                                 harmonic_max=cfg.tolerances.harmonic_max)
    gm.require_valid(None)
    # the two sweep orders are independent; the column-first one only feeds the certificate
    with ThreadPoolExecutor(max_workers=min(2, max_workers())) as pool:
        fut_row = pool.submit(ws.sweep, inp, "row-first")
        fut_col = pool.submit(ws.sweep, inp, "column-first")
        zeta, x3 = fut_row.result()
        zeta_col, _ = fut_col.result()
    grid = gm.grid
    gz = grid.derivatives()[0]
    surface = ws.ReconstructedSurface(params, grid.u, grid.v, zeta, x3, ws.eta_of(params, grid.values, gz, zeta),
                                      ws.conformal_factor_of(params, grid.values, gz, zeta), gm, inp.basepoint)
    integ = float(np.max(np.abs(zeta - zeta_col)))
    try:
        fields = surface_checks(report, params, gm, surface, cfg.tolerances, integrability=integ)
    except DegenerateInputError as exc:
        report.add("immersion", float("inf"), 0.0, note=str(exc))
        fields = {}
    report.data["surface"] = {
        "x3_at_basepoint": float(x3[inp.basepoint]),
        "x3_range": [float(np.min(x3)), float(np.max(x3))],
        "zeta_max_abs": float(np.max(np.abs(zeta))),
    }
    return RunResult(report, surface, fields)
