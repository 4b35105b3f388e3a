"""Batch front door: construct, check, evolve, and export scenarios.

Subcommands:

    gpbreather presets list
    gpbreather run --preset free --verify --out out/
    gpbreather run --preset free --evolve-3d --grid 64 --t-end 0.5 --out out/
    gpbreather verify --preset harmonic_i --v-convention paper
    gpbreather export --preset free --plane origin --t-end 6.283 --out trace.csv

Every flag has a config-file twin ([run] section, same key with '-'
replaced by '_'); explicit flags win.  Outputs are figure-ready CSV slices,
a JSON manifest with one pass/fail entry per enabled gate, JSON residual
reports, and binary grid dumps for evolutions.  Exit status is 0 iff every
enabled gate passed (2 for configuration errors).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import analytic, propagate, verify
from .analytic import PRESET_NAMES, BreatherField, breather_field
from .errors import ConfigError, GPBreatherError
from .scenario_io import describe_scenario, read_config, scenario_from_mapping
from .transform import ScenarioSpec, check_constraints

GATE_THRESHOLDS = {
    "constraints_max": 1e-9,
    "reduction_max": 1e-8,
    "gp_residual_max": 1e-5,
    "evolve_1d_linf": 1e-3,
    "evolve_1d_norm_drift": 1e-10,
    "evolve_3d_interior_l2": 5e-2,
    "evolve_3d_norm_drift": 1e-10,
}

_PLANES = ("xt", "yt", "zt", "origin")


def export_slice(field: BreatherField, plane: str, resolution: int,
                 t_end: float, extent: float, path) -> Path:
    """Write a CSV slice of |psi|^2 from the analytic assembly.

    Planes xt / yt / zt sample the named axis (other coordinates zero)
    against time; 'origin' writes the time trace at r = 0.  Rows are
    'coordinate,t,|psi|^2' (or 't,|psi|^2' for the origin trace).
    """
    if plane not in _PLANES:
        raise ConfigError(f"unknown plane {plane!r}; choose from {_PLANES}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ts = np.linspace(0.0, t_end, resolution)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if plane == "origin":
            writer.writerow(["t", "|psi|^2"])
            dens = analytic.origin_trace(field, ts)
            for t, v in zip(ts, dens):
                writer.writerow([repr(float(t)), repr(float(v))])
            return path
        axis = _PLANES.index(plane)
        coords = np.linspace(-extent, extent, resolution)
        writer.writerow(["coordinate", "t", "|psi|^2"])
        for t in ts:
            r = [np.zeros_like(coords)] * 3
            r[axis] = coords
            dens = np.abs(field(tuple(r), t)) ** 2
            for c, v in zip(coords, dens):
                writer.writerow([repr(float(c)), repr(float(t)), repr(float(v))])
    return path


def export_trajectory_slice(frames, plane: str, path) -> Path:
    """Write a CSV slice from recorded evolution frames.

    Uses the grid line through the origin along the named axis (the whole
    axis for 1D grids); 'origin' extracts the central node per frame.
    """
    if plane not in _PLANES:
        raise ConfigError(f"unknown plane {plane!r}; choose from {_PLANES}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if plane == "origin":
            writer.writerow(["t", "|psi|^2"])
            for t, grid in frames:
                center = tuple(n // 2 for n in grid.points_per_axis)
                val = abs(grid.samples[center]) ** 2
                writer.writerow([repr(float(t)), repr(float(val))])
            return path
        axis = _PLANES.index(plane)
        writer.writerow(["coordinate", "t", "|psi|^2"])
        for t, grid in frames:
            if grid.dims == 1:
                line = grid.samples
                coords = grid.axes()[0]
            else:
                sel = [n // 2 for n in grid.points_per_axis]
                sel[axis] = slice(None)
                line = grid.samples[tuple(sel)]
                coords = grid.axes()[axis]
            for c, v in zip(coords, np.abs(line) ** 2):
                writer.writerow([repr(float(c)), repr(float(t)), repr(float(v))])
    return path


# --- argument plumbing -------------------------------------------------------


def _add_scenario_args(p: argparse.ArgumentParser):
    p.add_argument("--preset", choices=PRESET_NAMES, default=None)
    p.add_argument("--config", default=None, help="config file with [scenario] (and [run]) sections")
    for j in (1, 2, 3, 4):
        p.add_argument(f"--c{j}", type=float, default=None,
                       help=f"constant coefficient c{j} (explicit scenario)")
    p.add_argument("--g", type=float, default=None, help="1D coupling constant G")
    p.add_argument("--v-convention", choices=["canonical", "paper", "both"], default=None)
    p.add_argument("--rho-convention", choices=["raw_antiderivative", "normalized_at_zero"],
                   default=None)


def _add_run_args(p: argparse.ArgumentParser):
    p.add_argument("--verify", action="store_true", default=None,
                   help="run constraint, reduction, and GP-residual gates")
    p.add_argument("--evolve-1d", action="store_true", default=None)
    p.add_argument("--evolve-3d", action="store_true", default=None)
    p.add_argument("--grid", type=int, default=None, help="points per axis")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--extent", type=float, default=None, help="half-width of the box")
    p.add_argument("--points", type=int, default=None, help="residual sample count")
    p.add_argument("--h", type=float, default=None, help="stencil step")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output directory")


_RUN_DEFAULTS = {
    "v_convention": "canonical",
    "rho_convention": "raw_antiderivative",
    "verify": False,
    "evolve_1d": False,
    "evolve_3d": False,
    "grid": None,
    "dt": None,
    "t_end": None,
    "extent": None,
    "points": 1000,
    "h": 1e-3,
    "seed": verify.DEFAULT_SEED,
    "out": "out",
}

_BOOL_KEYS = ("verify", "evolve_1d", "evolve_3d")


def _merge_config(args: argparse.Namespace) -> dict:
    """Config-file [run] values fill in unset flags; hard defaults last."""
    merged = dict(_RUN_DEFAULTS)
    if args.config:
        parser = read_config(args.config)
        if parser.has_section("run"):
            for key, raw in parser.items("run"):
                key = key.lower()
                if key not in merged and key != "preset":
                    raise ConfigError(f"unknown [run] key {key!r}")
                if key in _BOOL_KEYS:
                    merged[key] = raw.strip().lower() in ("1", "true", "yes", "on")
                elif key in ("grid", "points", "seed"):
                    merged[key] = int(raw)
                elif key in ("dt", "t_end", "extent", "h"):
                    merged[key] = float(raw)
                else:
                    merged[key] = raw.strip()
    for key in merged:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    if getattr(args, "preset", None):
        merged["preset"] = args.preset
    return merged


def _build_scenario(args: argparse.Namespace, merged: dict) -> ScenarioSpec:
    convention = merged["v_convention"]
    overrides = {
        "v_convention": "canonical" if convention == "both" else convention,
        "rho_convention": merged["rho_convention"],
    }
    explicit = [getattr(args, f"c{j}") for j in (1, 2, 3, 4)]
    if any(v is not None for v in explicit[:3]):
        c1, c2, c3 = (v if v is not None else 0.0 for v in explicit[:3])
        c4 = explicit[3] if explicit[3] is not None else 0.0
        G = args.g if args.g is not None else -1.0
        return analytic.constant_scenario(c1, c2, c3, c4, G=G, **overrides)
    preset = merged.get("preset")
    if preset:
        return analytic.scenario_preset(preset, **overrides)
    if args.config:
        parser = read_config(args.config)
        if parser.has_section("scenario"):
            items = dict(parser.items("scenario"))
            items.setdefault("v_convention", overrides["v_convention"])
            items.setdefault("rho_convention", overrides["rho_convention"])
            return scenario_from_mapping(items)
    raise ConfigError("no scenario given: use --preset, --c1.., or a config file")


# --- gates -------------------------------------------------------------------


def _gate(name: str, value: float, threshold: float | None = None) -> dict:
    threshold = GATE_THRESHOLDS[name] if threshold is None else threshold
    return {"name": name, "value": value, "threshold": threshold,
            "passed": bool(value <= threshold)}


def _verification_gates(spec: ScenarioSpec, conventions, points, h, seed, reports_dir=None):
    gates = []
    reports = {}
    ts = np.linspace(spec.time_window[0], spec.time_window[1], 200)
    creport = check_constraints(spec, ts)
    gates.append(_gate("constraints_max", creport.max_abs))
    reports["constraints"] = creport

    rreport = verify.reduction_residual(spec, n_points=points, seed=seed)
    gates.append(_gate("reduction_max", rreport.max_abs))
    reports["reduction"] = rreport

    import dataclasses

    for conv in conventions:
        cspec = dataclasses.replace(spec, v_convention=conv)
        field = breather_field(cspec)
        greport = verify.gp_residual(field, n_points=points, h_space=h, h_time=h, seed=seed)
        gate = _gate("gp_residual_max", greport.entry("gp_equation").max_abs)
        gate["name"] = f"gp_residual_max[{conv}]"
        gates.append(gate)
        reports[f"gp_residual_{conv}"] = greport
    if reports_dir is not None:
        for key, rep in reports.items():
            (Path(reports_dir) / f"{key}.json").write_text(rep.to_json())
    return gates, reports


# --- subcommands -------------------------------------------------------------


def _cmd_presets(args) -> int:
    if args.action != "list":
        raise ConfigError(f"unknown presets action {args.action!r}")
    descriptions = {
        "free": "constant cj = 1/sqrt(3); v = 0, g = -1, tau = t",
        "harmonic_i": "c1 = 1 + 0.5 cos t; harmonic potential along x",
        "harmonic_ii": "cj = 1 + 0.5 cos t; isotropic harmonic potential",
        "linear": "c4 = sin t; linear potential, drifting sheet",
    }
    for name in PRESET_NAMES:
        print(f"{name:12s} {descriptions[name]}")
    return 0


def _cmd_run(args) -> int:
    t_start = time.perf_counter()
    merged = _merge_config(args)
    spec = _build_scenario(args, merged)
    out = Path(merged["out"])
    out.mkdir(parents=True, exist_ok=True)

    convention = merged["v_convention"]
    conventions = ("canonical", "paper") if convention == "both" else (convention,)

    manifest = {
        "command": "run",
        "scenario": describe_scenario(spec),
        "params": {k: merged[k] for k in ("points", "h", "seed", "grid", "dt", "t_end", "extent")},
        "v_conventions_checked": list(conventions),
        "gates": [],
        "outputs": [],
        "timings": {},
    }
    gates = manifest["gates"]

    if merged["verify"]:
        t0 = time.perf_counter()
        new_gates, reports = _verification_gates(
            spec, conventions, merged["points"], merged["h"], merged["seed"], reports_dir=out
        )
        gates.extend(new_gates)
        manifest["outputs"].extend(sorted(f"{key}.json" for key in reports))
        manifest["timings"]["verify_s"] = time.perf_counter() - t0

    field = breather_field(spec)

    if merged["evolve_1d"]:
        t0 = time.perf_counter()
        n = merged["grid"] or 1024
        dt = merged["dt"] or 2e-4
        t_end = merged["t_end"] or float(np.pi / 2)
        extent = merged["extent"] or 20.0
        initial = propagate.sample_field(analytic.satsuma_yajima, [(-extent, extent)], n, 0.0)
        steps = int(round(t_end / dt))
        ref = lambda t: analytic.satsuma_yajima(initial.axes()[0], t)
        config = propagate.EvolutionConfig(
            dt=dt, n_steps=steps, coupling_g=spec.G, record_every=max(1, steps // 200),
            reference=ref,
        )
        result = propagate.evolve(config, initial)
        final = result.diagnostics[-1]
        drift = abs(final["norm"] - result.diagnostics[0]["norm"]) / result.diagnostics[0]["norm"]
        gates.append(_gate("evolve_1d_linf", final["linf"]))
        gates.append(_gate("evolve_1d_norm_drift", drift))
        propagate.write_trajectory(out / "evolve_1d", result)
        export_trajectory_slice(result.frames, "origin", out / "evolve_1d_origin.csv")
        manifest["outputs"] += ["evolve_1d/frames.json", "evolve_1d_origin.csv"]
        manifest["timings"]["evolve_1d_s"] = time.perf_counter() - t0

    if merged["evolve_3d"]:
        t0 = time.perf_counter()
        n = merged["grid"] or 64
        dt = merged["dt"] or 1e-3
        t_end = merged["t_end"] or 0.5
        extent = merged["extent"] or 10.0
        extents = [(-extent, extent)] * 3
        initial = propagate.sample_field(field, extents, n, 0.0)
        steps = int(round(t_end / dt))
        half = extent / 2.0
        region = tuple((-half, half) for _ in range(3))
        ref = lambda t: propagate.sample_field(field, extents, n, t).samples
        config = propagate.EvolutionConfig(
            dt=dt, n_steps=steps, scenario=spec, record_every=max(1, steps // 10),
            comparison_region=region, reference=ref,
        )
        result = propagate.evolve(config, initial)
        final = result.diagnostics[-1]
        drift = abs(final["norm"] - result.diagnostics[0]["norm"]) / result.diagnostics[0]["norm"]
        gates.append(_gate("evolve_3d_interior_l2", final["l2_rel"]))
        gates.append(_gate("evolve_3d_norm_drift", drift))
        propagate.write_trajectory(out / "evolve_3d", result)
        manifest["outputs"].append("evolve_3d/frames.json")
        manifest["timings"]["evolve_3d_s"] = time.perf_counter() - t0

    # figure-ready slices of the analytic assembly
    t0 = time.perf_counter()
    t_slice = merged["t_end"] or float(2 * np.pi)
    extent = merged["extent"] or 10.0
    export_slice(field, "origin", 512, t_slice, extent, out / "origin_trace.csv")
    export_slice(field, "xt", 256, t_slice, extent, out / "slice_xt.csv")
    manifest["outputs"] += ["origin_trace.csv", "slice_xt.csv"]
    manifest["timings"]["export_s"] = time.perf_counter() - t0
    manifest["timings"]["total_s"] = time.perf_counter() - t_start

    ok = all(g["passed"] for g in gates)
    manifest["exit_status"] = 0 if ok else 1
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    for g in gates:
        status = "PASS" if g["passed"] else "FAIL"
        print(f"{status} {g['name']}: {g['value']:.3e} (gate {g['threshold']:.1e})")
    print(f"manifest: {out / 'manifest.json'}")
    return 0 if ok else 1


def _cmd_verify(args) -> int:
    merged = _merge_config(args)
    spec = _build_scenario(args, merged)
    convention = merged["v_convention"]
    conventions = ("canonical", "paper") if convention == "both" else (convention,)
    out = Path(merged["out"])
    out.mkdir(parents=True, exist_ok=True)
    gates, _ = _verification_gates(
        spec, conventions, merged["points"], merged["h"], merged["seed"], reports_dir=out
    )
    ok = all(g["passed"] for g in gates)
    for g in gates:
        status = "PASS" if g["passed"] else "FAIL"
        print(f"{status} {g['name']}: {g['value']:.3e} (gate {g['threshold']:.1e})")
    return 0 if ok else 1


def _cmd_export(args) -> int:
    merged = _merge_config(args)
    out = Path(merged["out"]) if merged["out"] != "out" else Path(args.plane + ".csv")
    resolution = merged["grid"] or 512
    t_end = merged["t_end"] or float(2 * np.pi)
    extent = merged["extent"] or 10.0
    if args.trajectory:
        frames = propagate.read_trajectory(args.trajectory)
        path = export_trajectory_slice(frames, args.plane, out)
    else:
        spec = _build_scenario(args, merged)
        field = breather_field(spec)
        path = export_slice(field, args.plane, resolution, t_end, extent, out)
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gpbreather", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="construct, check, evolve, export")
    _add_scenario_args(p_run)
    _add_run_args(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_verify = sub.add_parser("verify", help="constraint and PDE-residual checks")
    _add_scenario_args(p_verify)
    _add_run_args(p_verify)
    p_verify.set_defaults(func=_cmd_verify)

    p_export = sub.add_parser("export", help="CSV slices of |psi|^2")
    _add_scenario_args(p_export)
    _add_run_args(p_export)
    p_export.add_argument("--plane", choices=_PLANES, required=True)
    p_export.add_argument("--trajectory", default=None,
                          help="directory of dumped frames to slice instead of the closed form")
    p_export.set_defaults(func=_cmd_export)

    p_presets = sub.add_parser("presets", help="preset catalogue")
    p_presets.add_argument("action", choices=["list"])
    p_presets.set_defaults(func=_cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except GPBreatherError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
