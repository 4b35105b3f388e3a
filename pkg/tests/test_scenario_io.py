"""Scenario file parsing and round-trips."""

import numpy as np
import pytest

from gpbreather.errors import ConfigError
from gpbreather.scenario_io import (
    describe_scenario,
    format_timefunction,
    load_scenario,
    parse_timefunction,
    scenario_from_mapping,
)
from gpbreather.timefunc import Constant, Harmonic
from gpbreather.transform import eval_nonlinearity, eval_rho, eval_tau


def test_parse_constant():
    tf = parse_timefunction("constant:0.5")
    assert isinstance(tf, Constant) and tf.value == 0.5


def test_parse_harmonic():
    tf = parse_timefunction("harmonic:1,0.5,1,0")
    assert isinstance(tf, Harmonic)
    assert (tf.offset, tf.amplitude, tf.omega, tf.phase) == (1.0, 0.5, 1.0, 0.0)
    short = parse_timefunction("harmonic:1,0.5,2")
    assert short.phase == 0.0


@pytest.mark.parametrize("bad", ["wavelet:1,2", "constant:a", "harmonic:1", "constant:1,2"])
def test_parse_rejects(bad):
    with pytest.raises(ConfigError):
        parse_timefunction(bad)


def test_format_roundtrip():
    for tf in (Constant(-1.0 / 3.0), Harmonic(1.0, 0.5, 1.0, 0.25)):
        back = parse_timefunction(format_timefunction(tf))
        assert back == tf


def test_mapping_preset():
    spec = scenario_from_mapping({"preset": "harmonic_ii", "v_convention": "paper"})
    assert spec.v_convention == "paper"
    assert abs(eval_nonlinearity(spec, 0.0) - (-2.0)) <= 1e-12


def test_mapping_explicit_matches_preset(harmonic_i_spec):
    inv = repr(float(1.0 / np.sqrt(3.0)))
    spec = scenario_from_mapping({
        "c1": "harmonic:1,0.5,1,0",
        "c2": f"constant:{inv}",
        "c3": f"constant:{inv}",
        "G": "-1",
    })
    for t in (0.0, 1.3, 4.0):
        assert abs(eval_tau(spec, t) - eval_tau(harmonic_i_spec, t)) <= 1e-12
        assert abs(eval_rho(spec, t) - eval_rho(harmonic_i_spec, t)) <= 1e-12


def test_mapping_linear_terms():
    inv = float(1.0 / np.sqrt(3.0))
    spec = scenario_from_mapping({
        "c1": f"constant:{inv!r}",
        "c2": f"constant:{inv!r}",
        "c3": f"constant:{inv!r}",
        "c4": f"harmonic:0,1,1,{float(-np.pi / 2)!r}",
        "d7": f"harmonic:0,{-inv!r},1,0",
        "d8": f"harmonic:0,{-inv!r},1,0",
        "d9": f"harmonic:0,{-inv!r},1,0",
    })
    assert abs(eval_nonlinearity(spec, 1.0) - (-1.0)) <= 1e-12


def test_mapping_rejects_partial_linear_terms():
    with pytest.raises(ConfigError):
        scenario_from_mapping({
            "c1": "constant:1", "c2": "constant:1", "c3": "constant:1",
            "d7": "constant:0",
        })


def test_mapping_requires_scenario():
    with pytest.raises(ConfigError):
        scenario_from_mapping({"g": "-1"})


def test_mapping_unknown_preset():
    with pytest.raises(ConfigError):
        scenario_from_mapping({"preset": "nope"})


def test_load_scenario_file(tmp_path):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text(
        "[scenario]\n"
        "preset = free\n"
        "v_convention = canonical\n"
        "time_window = 0, 6.283185307179586\n"
    )
    spec = load_scenario(cfg)
    assert spec.time_window == (0.0, 6.283185307179586)


def test_load_scenario_missing_section(tmp_path):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text("[other]\nx = 1\n")
    with pytest.raises(ConfigError):
        load_scenario(cfg)


def test_load_scenario_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_scenario(tmp_path / "absent.cfg")


def test_describe_scenario(free_spec):
    desc = describe_scenario(free_spec)
    assert desc["G"] == -1.0
    assert len(desc["c"]) == 4 and len(desc["d"]) == 10
    assert all(s.startswith("constant:") for s in desc["c"])
