"""Flat key=value scenario files.

Format (INI-style; see README for the full key list):

    [scenario]
    preset = harmonic_i            # or explicit coefficients:
    # c1 = harmonic:1,0.5,1,0      # offset, amplitude, omega, phase
    # c2 = constant:0.5773502691896258
    # c4 = constant:0
    # d7 = harmonic:0,-0.5773502691896258,1,0
    G = -1
    v_convention = canonical
    rho_convention = raw_antiderivative
    time_window = 0, 12.566370614359172

`preset` wins over explicit coefficients.  Explicit scenarios get their
quadratic-phase coefficients from the diagonal gauge; d7..d9 may be supplied
for scenarios with a drifting c4 and are checked against the linear
compatibility equation.
"""

from __future__ import annotations

import configparser
from pathlib import Path

import numpy as np

from .analytic import PRESET_NAMES, scenario_preset
from .errors import ConfigError
from .timefunc import Constant, Harmonic, TimeFunction
from .transform import DEFAULT_TIME_WINDOW, ScenarioSpec, derive_gauge_d


def parse_timefunction(text: str) -> TimeFunction:
    """Parse 'constant:a' or 'harmonic:a,b,w,phi' (a + b cos(w t + phi))."""
    head, _, rest = text.strip().partition(":")
    kind = head.strip().lower()
    try:
        params = [float(p) for p in rest.split(",")] if rest.strip() else []
    except ValueError as exc:
        raise ConfigError(f"bad numeric parameters in {text!r}") from exc
    if kind == "constant":
        if len(params) != 1:
            raise ConfigError(f"constant takes 1 parameter, got {text!r}")
        return Constant(params[0])
    if kind == "harmonic":
        if len(params) == 3:
            params.append(0.0)
        if len(params) != 4:
            raise ConfigError(f"harmonic takes 3 or 4 parameters, got {text!r}")
        return Harmonic(*params)
    raise ConfigError(f"unknown time-function kind {kind!r} in {text!r}")


def format_timefunction(tf: TimeFunction) -> str:
    if isinstance(tf, Constant):
        return f"constant:{tf.value!r}"
    if isinstance(tf, Harmonic):
        return f"harmonic:{tf.offset!r},{tf.amplitude!r},{tf.omega!r},{tf.phase!r}"
    return repr(tf)


def _parse_window(text: str) -> tuple[float, float]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 2:
        raise ConfigError(f"time_window needs two numbers, got {text!r}")
    lo, hi = (float(p) for p in parts)
    if not lo < hi:
        raise ConfigError("time_window must be increasing")
    return lo, hi


def scenario_from_mapping(items: dict) -> ScenarioSpec:
    """Build a ScenarioSpec from a flat mapping of scenario keys."""
    items = {k.lower(): v for k, v in items.items()}
    overrides = {}
    if "g" in items:
        overrides["G"] = float(items["g"])
    if "v_convention" in items:
        overrides["v_convention"] = items["v_convention"].strip()
    if "rho_convention" in items:
        overrides["rho_convention"] = items["rho_convention"].strip()
    if "time_window" in items:
        overrides["time_window"] = _parse_window(items["time_window"])

    if "preset" in items:
        name = items["preset"].strip()
        if name not in PRESET_NAMES:
            raise ConfigError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
        try:
            return scenario_preset(name, **overrides)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    if not any(f"c{j}" in items for j in (1, 2, 3)):
        raise ConfigError("scenario needs either 'preset' or explicit c1..c3")
    c = tuple(
        parse_timefunction(items.get(f"c{j}", "constant:0")) for j in (1, 2, 3, 4)
    )
    linear_keys = [f"d{j}" in items for j in (7, 8, 9)]
    linear_d = None
    if any(linear_keys):
        if not all(linear_keys):
            raise ConfigError("supply all of d7, d8, d9 or none")
        linear_d = tuple(parse_timefunction(items[f"d{j}"]) for j in (7, 8, 9))
    window = overrides.get("time_window", DEFAULT_TIME_WINDOW)
    d = derive_gauge_d(c, linear_d=linear_d, time_window=window)
    spec = ScenarioSpec(c=c, d=d, **{"G": -1.0, **overrides})
    spec.validate()
    return spec


def read_config(path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with path.open() as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return parser


def load_scenario(path) -> ScenarioSpec:
    """Load a scenario file (its [scenario] section)."""
    parser = read_config(path)
    if not parser.has_section("scenario"):
        raise ConfigError(f"{path} has no [scenario] section")
    return scenario_from_mapping(dict(parser.items("scenario")))


def describe_scenario(spec: ScenarioSpec) -> dict:
    """JSON-friendly summary for manifests."""
    return {
        "c": [format_timefunction(cj) for cj in spec.c],
        "d": [format_timefunction(dj) for dj in spec.d],
        "G": spec.G,
        "v_convention": spec.v_convention,
        "rho_convention": spec.rho_convention,
        "time_window": list(spec.time_window),
    }
