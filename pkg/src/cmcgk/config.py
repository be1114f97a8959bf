"""Scene configuration files for the command line.

A scene is a JSON object; unknown keys are rejected so that a typo never
silently falls back to a default.  Complex numbers are written either as a
plain number or as a two-element list ``[re, im]``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError

__all__ = ["SceneConfig", "Domain", "GaussMapSpec", "Basepoint", "Tolerances", "Outputs",
           "load_config", "parse_config", "MIN_GRID", "GAUSS_KINDS"]

MIN_GRID = 33
GAUSS_KINDS = ("identity", "holomorphic", "geodesic_tanh", "expression", "sampled-file")


class _Ctx:
    """Resolves a dotted field path to a line of the source text for error messages."""

    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source

    def line_of(self, path: str) -> int | None:
        key = path.split(".")[-1]
        m = re.search(r'"%s"\s*:' % re.escape(key), self.text)
        return self.text.count("\n", 0, m.start()) + 1 if m else None

    def error(self, path: str, message: str) -> ConfigError:
        line = self.line_of(path) if path else None
        where = f"{self.source}:{line}" if line else self.source
        return ConfigError(f"{where}: field '{path}': {message}" if path else f"{where}: {message}")


def _complex(ctx, path, x) -> complex:
    if isinstance(x, bool):
        raise ctx.error(path, "expected a number or [re, im]")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x):
        return complex(x[0], x[1])
    raise ctx.error(path, "expected a number or [re, im]")


def _real(ctx, path, x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ctx.error(path, "expected a real number")
    return float(x)


def _int(ctx, path, x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ctx.error(path, "expected an integer")
    return x


def _object(ctx, path, x, allowed, required=()) -> dict:
    if not isinstance(x, dict):
        raise ctx.error(path, "expected an object")
    for k in x:
        if k not in allowed:
            sub = f"{path}.{k}" if path else k
            raise ctx.error(sub, f"unknown key (allowed: {', '.join(sorted(allowed))})")
    for k in required:
        if k not in x:
            raise ctx.error(path, f"missing required key '{k}'")
    return x


@dataclass(frozen=True)
class Domain:
    center: complex = 0j
    half_width: float = 0.55
    half_height: float = 0.55


@dataclass(frozen=True)
class GaussMapSpec:
    kind: str = "identity"
    parameters: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Basepoint:
    z0: complex = 0j
    zeta0: complex = 0j
    x30: float = 0.0


@dataclass(frozen=True)
class Tolerances:
    domain_guard: float = 1e-6
    harmonic_max: float = 1e-6
    hopf_max: float = 1e-4
    integrability_max: float = 1e-6
    algebraic_max: float = 1e-6
    mean_curvature_max: float = 1e-4
    lorentz_max: float = 1e-10
    sister_max: float = 1e-8


@dataclass(frozen=True)
class Outputs:
    mesh_path: str | None = None
    report_path: str | None = None
    samples_path: str | None = None
    mesh_format: str = "obj"
    figures: bool = True


@dataclass(frozen=True)
class SceneConfig:
    kappa: float
    tau: float
    domain: Domain = Domain()
    nu: int = 81
    nv: int = 81
    gauss_map: GaussMapSpec = GaussMapSpec()
    sister_gauss_map: GaussMapSpec | None = None
    basepoint: Basepoint = Basepoint()
    tolerances: Tolerances = Tolerances()
    outputs: Outputs = Outputs()
    base_dir: Path = Path(".")

    def resolve(self, path: str | None) -> Path | None:
        """Output and sample paths are relative to the configuration file."""
        if path is None:
            return None
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p


_TOP = {"kappa", "tau", "domain", "grid", "gauss_map", "sister_gauss_map", "basepoint", "tolerances", "outputs"}


def _gauss_spec(ctx, path, x) -> GaussMapSpec:
    x = _object(ctx, path, x, {"kind", "parameters"}, required=("kind",))
    kind = x["kind"]
    if kind not in GAUSS_KINDS:
        raise ctx.error(f"{path}.kind", f"unknown kind {kind!r} (one of {', '.join(GAUSS_KINDS)})")
    params = _object(ctx, f"{path}.parameters", x.get("parameters", {}),
                     {"a", "angle", "rotation", "expression", "file"})
    out = {}
    for k, val in params.items():
        sub = f"{path}.parameters.{k}"
        if k in ("expression", "file"):
            if not isinstance(val, str):
                raise ctx.error(sub, "expected a string")
            out[k] = val
        else:
            out[k] = _real(ctx, sub, val)
    if kind in ("holomorphic", "expression") and "expression" not in out:
        raise ctx.error(f"{path}.parameters", f"kind {kind!r} needs 'expression'")
    if kind == "sampled-file" and "file" not in out:
        raise ctx.error(f"{path}.parameters", "kind 'sampled-file' needs 'file'")
    return GaussMapSpec(kind, out)


def parse_config(text: str, source: str = "<config>", base_dir: Path | str = ".") -> SceneConfig:
    ctx = _Ctx(text, source)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    raw = _object(ctx, "", raw, _TOP, required=("kappa", "tau"))
    kappa = _real(ctx, "kappa", raw["kappa"])
    tau = _real(ctx, "tau", raw["tau"])
    if kappa >= 0:
        raise ctx.error("kappa", "reconstruction runs need kappa < 0")

    d = _object(ctx, "domain", raw.get("domain", {}), {"center", "half_width", "half_height"})
    domain = Domain(
        center=_complex(ctx, "domain.center", d.get("center", 0.0)),
        half_width=_real(ctx, "domain.half_width", d.get("half_width", 0.55)),
        half_height=_real(ctx, "domain.half_height", d.get("half_height", d.get("half_width", 0.55))),
    )
    if domain.half_width <= 0 or domain.half_height <= 0:
        raise ctx.error("domain", "half sizes must be positive")

    gr = _object(ctx, "grid", raw.get("grid", {}), {"nu", "nv"})
    nu = _int(ctx, "grid.nu", gr.get("nu", 81))
    nv = _int(ctx, "grid.nv", gr.get("nv", nu))
    if nu < MIN_GRID or nv < MIN_GRID:
        raise ctx.error("grid", f"grid must be at least {MIN_GRID}x{MIN_GRID}")

    gauss_map = _gauss_spec(ctx, "gauss_map", raw.get("gauss_map", {"kind": "identity"}))
    sister = _gauss_spec(ctx, "sister_gauss_map", raw["sister_gauss_map"]) if "sister_gauss_map" in raw else None

    b = _object(ctx, "basepoint", raw.get("basepoint", {}), {"z0", "zeta0", "x30"})
    basepoint = Basepoint(
        z0=_complex(ctx, "basepoint.z0", b.get("z0", 0.0)),
        zeta0=_complex(ctx, "basepoint.zeta0", b.get("zeta0", 0.0)),
        x30=_real(ctx, "basepoint.x30", b.get("x30", 0.0)),
    )

    names = set(Tolerances.__dataclass_fields__)
    t = _object(ctx, "tolerances", raw.get("tolerances", {}), names)
    tol = Tolerances(**{k: _real(ctx, f"tolerances.{k}", val) for k, val in t.items()})
    for k in names:
        if not getattr(tol, k) > 0:
            raise ctx.error(f"tolerances.{k}", "must be positive")

    o = _object(ctx, "outputs", raw.get("outputs", {}),
                {"mesh_path", "report_path", "samples_path", "mesh_format", "figures"})
    for k in ("mesh_path", "report_path", "samples_path"):
        if k in o and not isinstance(o[k], str):
            raise ctx.error(f"outputs.{k}", "expected a string")
    fmt = o.get("mesh_format", "obj")
    if fmt not in ("obj", "ply"):
        raise ctx.error("outputs.mesh_format", "expected 'obj' or 'ply'")
    figures = o.get("figures", True)
    if not isinstance(figures, bool):
        raise ctx.error("outputs.figures", "expected true or false")
    outputs = Outputs(o.get("mesh_path"), o.get("report_path"), o.get("samples_path"), fmt, figures)

    return SceneConfig(kappa, tau, domain, nu, nv, gauss_map, sister, basepoint, tol, outputs, Path(base_dir))


def load_config(path: str | Path) -> SceneConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    return parse_config(text, source=str(path), base_dir=path.parent)


def as_dict(cfg: SceneConfig) -> dict[str, Any]:
    """JSON-friendly echo of a configuration for reports."""
    cplx = lambda z: [z.real, z.imag]  # noqa: E731
    gm = lambda s: None if s is None else {"kind": s.kind, "parameters": dict(sorted(s.parameters.items()))}  # noqa: E731
    return {
        "kappa": cfg.kappa,
        "tau": cfg.tau,
        "domain": {"center": cplx(cfg.domain.center), "half_width": cfg.domain.half_width,
                   "half_height": cfg.domain.half_height},
        "grid": {"nu": cfg.nu, "nv": cfg.nv},
        "gauss_map": gm(cfg.gauss_map),
        "sister_gauss_map": gm(cfg.sister_gauss_map),
        "basepoint": {"z0": cplx(cfg.basepoint.z0), "zeta0": cplx(cfg.basepoint.zeta0), "x30": cfg.basepoint.x30},
        "tolerances": {k: getattr(cfg.tolerances, k) for k in sorted(Tolerances.__dataclass_fields__)},
    }
