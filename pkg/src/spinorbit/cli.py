"""Batch command line: render, sweep, classify, photon, oracle.

Each subcommand reads a scene document (--config takes a path or the
name of a bundled preset), writes its outputs under --out, and exits 0
only if every requested file was written.  Module errors map to
distinct exit codes (see errors.py); angles in files and reports are
degrees, phases radians, flagged by _deg/_rad name suffixes.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import FitDiverged, SchemaError, SimulationError
from .fileio import write_csv, write_json, write_pgm16
from .interferometer import (
    ScanLine,
    analytic_pattern,
    extract_scan,
    michelson,
    visibility_fit,
    vortex_parity,
)
from .optics import JONES_CONVENTION, compose
from .photostats import fit_counts, sample_counts, sweep_visibility
from .scene import (
    SceneConfig,
    arm_matrices,
    element_matrix,
    element_retarder_spec,
    parse_scene,
    state_from_config,
)
from .topology import homotopy_class, lift_path, relative_class, su2_endpoint_sign

#: Sweep angles used when a scene has no sweep section (eps from 1 to 0).
DEFAULT_SWEEP_THETA_DEG = (0.0, 5.0, 10.0, 15.0, 20.0, 22.5, 25.0, 30.0, 35.0, 40.0, 45.0)


def load_config_text(name_or_path: str) -> str:
    """Read a scene document from a file, or fall back to a bundled preset."""
    path = Path(name_or_path)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    preset = resources.files("spinorbit").joinpath("presets", f"{name_or_path}.json")
    if preset.is_file():
        return preset.read_text(encoding="utf-8")
    raise SimulationError(f"config not found: {name_or_path!r} (no such file or preset)")


def _render_pattern(config: SceneConfig):
    state = state_from_config(config)
    arm1, arm2 = arm_matrices(config)
    return michelson(
        state,
        arm1,
        arm2,
        tilt=config.resolved_tilt(),
        grid=config.grid,
        arm_phase=config.arm_phase_rad,
        arm1_elements=config.arm1,
        arm2_elements=config.arm2,
    )


def run_render(config: SceneConfig, outdir: Path) -> list:
    """Interferogram image, diagonal scan CSV, and fringe report JSON."""
    base = config.basename or "render"
    pattern = _render_pattern(config)
    files = write_pgm16(outdir / f"{base}.pgm", pattern.intensity)

    scan = extract_scan(pattern, ScanLine.diagonal())
    files.append(
        write_csv(
            outdir / f"{base}_scan.csv",
            ["x", "y", "intensity"],
            zip(scan.x, scan.y, scan.intensity),
        )
    )

    report = visibility_fit(scan, pattern.tilt)
    try:
        parity = vortex_parity(pattern)
    except FitDiverged:
        # Strongly deformed fringes have no single parity; record that
        # rather than failing the whole render.
        parity = None
    payload = {
        "visibility": report.visibility,
        "fringe_phase_rad": report.fringe_phase,
        "vortex_parity": parity.value if parity is not None else "Indeterminate",
        "fit_residual": report.residual,
        "scan_line": "diagonal",
        "tilt_rad": pattern.tilt,
        "arm_phase_rad": pattern.arm_phase,
    }
    files.append(write_json(outdir / f"{base}_report.json", payload))
    return files


def run_oracle(config: SceneConfig, outdir: Path) -> list:
    """Closed-form pattern image for the configured eps input.

    The fringe origin is arm_phase + pi, which is where the rendered
    pipeline's fringes sit for the same scene, so oracle and render
    outputs of an eps scene are directly comparable.
    """
    if config.input.eps is None:
        raise SchemaError("oracle requires an 'eps' input")
    base = config.basename or "oracle"
    xx, yy = config.grid.mesh()
    image = analytic_pattern(
        config.input.eps,
        xx,
        yy,
        config.resolved_tilt(),
        phase_offset=config.arm_phase_rad + np.pi,
        waist=config.grid.waist,
    )
    return write_pgm16(outdir / f"{base}.pgm", image)


def run_classify(config: SceneConfig, outdir: Path) -> list:
    """Loop-class report: per-arm endpoint sign, class, crossings, relative class."""
    base = config.basename or "classify"
    state = state_from_config(config)
    payload = {}
    for name, elements in (("arm1", config.arm1), ("arm2", config.arm2)):
        matrices = [element_matrix(el) for el in elements]
        total = compose(matrices) if matrices else np.eye(2, dtype=complex)
        sign = su2_endpoint_sign(total)
        path = lift_path(state, [element_retarder_spec(el) for el in elements])
        payload[name] = {
            "elements": [
                {"type": el.type, "axis": el.axis}
                if el.type == "polarizer"
                else {"type": el.type, "angle_deg": el.angle_deg}
                for el in elements
            ],
            "endpoint": "+I" if sign > 0 else "-I",
            "class": homotopy_class(matrices).value,
            "closed": path.closed,
            "crossings": path.crossings,
        }
    payload["relative_class"] = relative_class(
        [element_matrix(el) for el in config.arm1],
        [element_matrix(el) for el in config.arm2],
    ).value
    payload["jones_convention"] = JONES_CONVENTION
    return [write_json(outdir / f"{base}_classify.json", payload)]


def run_photon(config: SceneConfig, outdir: Path) -> list:
    """Count scan CSV and weighted fringe fit report."""
    base = config.basename or "photon"
    pattern = _render_pattern(config)
    counts = sample_counts(
        pattern, ScanLine.diagonal(), config.photon.n_total, config.photon.seed
    )
    files = [
        write_csv(
            outdir / f"{base}_counts.csv",
            ["x", "y", "count"],
            zip(counts.x, counts.y, counts.counts),
        )
    ]
    report = fit_counts(counts, pattern.tilt)
    payload = {
        "visibility": report.visibility,
        "visibility_sigma": report.sigma_visibility,
        "fringe_phase_rad": report.fringe_phase,
        "fringe_phase_sigma_rad": report.sigma_phase,
        "vortex_parity": report.vortex_parity.value,
        "fit_residual": report.residual,
        "n_total": counts.n_total,
        "seed": counts.seed,
        "rng": counts.algorithm,
        "scan_line": "diagonal",
        "tilt_rad": pattern.tilt,
        "arm_phase_rad": pattern.arm_phase,
    }
    files.append(write_json(outdir / f"{base}_report.json", payload))
    return files


def run_sweep(config: SceneConfig, outdir: Path) -> list:
    """Visibility-versus-eps CSV table in the photon regime."""
    base = config.basename or "sweep"
    thetas_deg = config.sweep_theta_deg or DEFAULT_SWEEP_THETA_DEG
    rows = sweep_visibility(
        [np.deg2rad(t) for t in thetas_deg],
        config.photon.n_total,
        config.photon.seed,
        grid=config.grid,
        tilt=config.tilt,
    )
    table = [
        (theta_deg, row.eps, row.visibility, row.sigma_visibility)
        for theta_deg, row in zip(thetas_deg, rows)
    ]
    return [
        write_csv(
            outdir / f"{base}_sweep.csv",
            ["theta_deg", "eps", "visibility", "sigma_visibility"],
            table,
        )
    ]


RUNNERS = {
    "render": run_render,
    "sweep": run_sweep,
    "classify": run_classify,
    "photon": run_photon,
    "oracle": run_oracle,
}

_HELP = {
    "render": "render an interferogram and fit its fringes",
    "sweep": "photon-regime visibility versus eps table",
    "classify": "loop classes and crossing counts of the two arms",
    "photon": "sample and fit a photocount scan",
    "oracle": "closed-form pattern image for an eps input",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinorbit", description="spin-orbit mode interferometry, batch front end"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, runner_help in _HELP.items():
        cmd = sub.add_parser(name, help=runner_help)
        cmd.add_argument("--config", required=True, help="scene file path or preset name")
        cmd.add_argument("--out", default=".", help="output directory (default: .)")
        cmd.add_argument("--seed", type=int, default=None, help="override the photon seed")
        cmd.add_argument("--grid", default=None, metavar="NX,NY", help="override grid pixels")
        cmd.add_argument("--quiet", action="store_true", help="suppress the file listing")
    return parser


def _apply_overrides(config: SceneConfig, args) -> SceneConfig:
    if args.grid is not None:
        try:
            nx, ny = (int(part) for part in args.grid.split(","))
        except ValueError as exc:
            raise SchemaError(f"--grid expects NX,NY, got {args.grid!r}") from exc
        try:
            config = config.with_grid(nx, ny)
        except ValueError as exc:
            raise SchemaError(f"invalid --grid: {exc}") from exc
    if args.seed is not None:
        config = config.with_seed(args.seed)
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = parse_scene(load_config_text(args.config))
        config = _apply_overrides(config, args)
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        files = RUNNERS[args.command](config, outdir)
        if not args.quiet:
            for path in files:
                print(path)
        return 0
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
