"""Command line: ``cmcgk reconstruct | verify | sister-check | export``.

Exit codes: 0 every check passed, 1 some check failed, 2 usage or
configuration error, 3 numerical abort.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import sister as si
from .config import SceneConfig, as_dict, load_config
from .errors import ConfigError, DegenerateInputError, DomainError, NumericalAbort
from .mesh import export_mesh
from .model import ModelParams
from .pipeline import build_gauss_map, run_reconstruction, write_samples
from .report import Report
from .suites import SUITES, run_suite

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3


def _emit(report: Report, report_path: Path | None, figures: dict | None = None, quiet: bool = False) -> int:
    """Write the report (plus figures) and print one line per check."""
    if report_path is not None:
        report_path.parent.mkdir(parents=True, exist_ok=True)
        if figures:
            for suffix, draw in figures.items():
                out = report_path.with_name(f"{report_path.stem}_{suffix}.png")
                draw(out)
                report.artifacts.append(out.name)
        report.write(report_path)
    if not quiet:
        print("\n".join(report.render_lines()))
    return EXIT_OK if report.passed else EXIT_FAIL


def _abort_report(command: str, cfg: SceneConfig | None, abort: NumericalAbort) -> Report:
    report = Report(command, config=as_dict(cfg) if cfg else None)
    detail = {k: (v if not isinstance(v, complex) else [v.real, v.imag]) for k, v in abort.detail.items()}
    report.data["abort"] = {"message": str(abort), "node": list(map(int, abort.node)) if abort.node else None,
                            "detail": detail}
    report.add("completed", None, 0.0, note=str(abort))
    return report


def _reconstruct_figures(result, title):
    from .plotting import plot_residual_maps, plot_surface

    surf = result.surface
    return {
        "surface": lambda p: plot_surface(surf.points(), p, title=title),
        "residuals": lambda p: plot_residual_maps(surf.u, surf.v, result.fields, p),
    }


def cmd_reconstruct(args) -> int:
    cfg = load_config(args.config)
    out = cfg.outputs
    report_path = Path(args.report) if args.report else cfg.resolve(out.report_path)
    mesh_path = Path(args.out_mesh) if args.out_mesh else cfg.resolve(out.mesh_path)
    fmt = args.format or out.mesh_format
    try:
        result = run_reconstruction(cfg)
    except NumericalAbort as abort:
        report = _abort_report("reconstruct", cfg, abort)
        report.timestamp = args.timestamp
        _emit(report, report_path)
        print(f"aborted: {abort}", file=sys.stderr)
        return EXIT_ABORT
    report = result.report
    report.timestamp = args.timestamp
    surf = result.surface
    if mesh_path is not None:
        mesh_path.parent.mkdir(parents=True, exist_ok=True)
        export_mesh(surf.points(), mesh_path, fmt)
        report.artifacts.append(mesh_path.name)
    samples = cfg.resolve(out.samples_path)
    if samples is not None:
        write_samples(samples, surf.u, surf.v, surf.g.grid.values, surf.points())
        report.artifacts.append(samples.name)
    figures = _reconstruct_figures(result, surf.g.label) if (out.figures and not args.no_figures) else None
    return _emit(report, report_path, figures)


def cmd_verify(args) -> int:
    if args.config:
        args.out_mesh = None
        args.format = None
        return cmd_reconstruct(args)
    report = run_suite(args.suite)
    report.timestamp = args.timestamp
    figures = None
    if not args.no_figures:
        from .plotting import plot_checks

        figures = {"checks": lambda p: plot_checks(report.checks, p)}
    return _emit(report, Path(args.report) if args.report else None, figures)


def cmd_sister_check(args) -> int:
    cfg = load_config(args.config)
    params = ModelParams(cfg.kappa, cfg.tau)
    g = build_gauss_map(cfg)
    g_hat = g if cfg.sister_gauss_map is None else build_gauss_map(cfg, cfg.sister_gauss_map)
    report = Report("sister-check", config=as_dict(cfg), timestamp=args.timestamp)
    tol = cfg.tolerances.sister_max
    try:
        pair = si.SisterPair(params, g, g_hat)
    except DegenerateInputError as exc:
        report.add("zeta_algebraic", None, tol, note=str(exc))
        return _emit(report, Path(args.report) if args.report else cfg.resolve(cfg.outputs.report_path))
    for name, val in si.associate_checks(pair).items():
        report.add(f"sister.{name}", val, tol)
    report.add("sister.phase_identity", si.phase_identity_residual(params), 1e-14)
    if cfg.gauss_map.kind == "identity":
        ex = si.example_revolution(params, g.grid.z)
        report.add("sister.zeta_vs_revolution", float(np.max(np.abs(ex.zeta - pair.zeta))), tol)
        if ex.limit_branch:
            report.notes.append("tau = 0: revolution example taken in its limit form")
    if params.tau == 0:
        report.notes.append("tau = 0: theta = pi/2, so Q(g) = -Q(g_hat)")
    report.data["theta"] = params.theta
    report.data["tau_hat"] = params.tau_hat
    return _emit(report, Path(args.report) if args.report else cfg.resolve(cfg.outputs.report_path))


def cmd_export(args) -> int:
    cfg = load_config(args.config)
    fmt = args.format or cfg.outputs.mesh_format
    path = Path(args.out) if args.out else cfg.resolve(cfg.outputs.mesh_path)
    if path is None:
        raise ConfigError("export needs --out or outputs.mesh_path")
    try:
        result = run_reconstruction(cfg)
    except NumericalAbort as abort:
        print(f"aborted: {abort}", file=sys.stderr)
        return EXIT_ABORT
    path.parent.mkdir(parents=True, exist_ok=True)
    export_mesh(result.surface.points(), path, fmt)
    print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cmcgk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--report", help="JSON report path; a _checks.tsv table and figures go next to it")
        sp.add_argument("--timestamp", action="store_true", help="record the run time in the report metadata")
        sp.add_argument("--no-figures", action="store_true", help="skip the PNG figures")

    r = sub.add_parser("reconstruct", help="reconstruct a surface from a scene file")
    r.add_argument("--config", required=True)
    r.add_argument("--out-mesh")
    r.add_argument("--format", choices=("obj", "ply"))
    common(r)
    r.set_defaults(func=cmd_reconstruct)

    v = sub.add_parser("verify", help="run a built-in suite or check a scene")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--suite", choices=sorted(SUITES) + ["all"])
    g.add_argument("--config")
    common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sister-check", help="check the sister relations for a pair of Gauss maps")
    s.add_argument("--config", required=True)
    s.add_argument("--report")
    s.add_argument("--timestamp", action="store_true")
    s.set_defaults(func=cmd_sister_check)

    e = sub.add_parser("export", help="reconstruct and write only the mesh")
    e.add_argument("--config", required=True)
    e.add_argument("--format", choices=("obj", "ply"))
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateInputError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NumericalAbort as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
