"""Breather profile identities and 3D assembly.

The profile checks pin the closed form against independently coded
expressions (2 sech from the cosh identities, the plain unscaled formula,
finite-difference residuals of the reduced 1D equation).
"""

import numpy as np
import pytest

from gpbreather.analytic import (
    BreatherField,
    assemble_psi,
    breather_field,
    constant_scenario,
    origin_trace,
    peak_spacing,
    satsuma_yajima,
    scenario_preset,
    single_soliton,
)
from gpbreather.errors import UnknownPreset


class TestSatsumaYajima:
    def test_origin_at_tau_zero(self):
        val = satsuma_yajima(0.0, 0.0)
        assert abs(val - 2.0) <= 1e-15

    def test_quarter_period_magnitude(self):
        assert abs(abs(satsuma_yajima(0.0, np.pi / 4)) - 4.0) <= 1e-12

    def test_initial_profile_is_2sech(self):
        zs = np.linspace(-10.0, 10.0, 1000)
        vals = satsuma_yajima(zs, 0.0)
        assert np.max(np.abs(vals - 2.0 / np.cosh(zs))) <= 1e-12
        assert np.max(np.abs(vals.imag)) <= 1e-15

    def test_overflow_safe_tail(self):
        val = satsuma_yajima(50.0, 1.3)
        assert np.isfinite(val.real) and np.isfinite(val.imag)
        assert abs(val) <= 1e-20
        for z in (300.0, 1000.0, 1e6):
            v = satsuma_yajima(z, 0.7)
            assert np.isfinite(v.real) and np.isfinite(v.imag)

    def test_even_in_zeta(self):
        for z, tau in ((1.234, 0.77), (5.5, 2.0), (0.01, 1.3)):
            assert satsuma_yajima(-z, tau) == satsuma_yajima(z, tau)

    def test_intensity_period(self):
        zs = np.linspace(-3.0, 3.0, 61)[:, None]
        taus = np.linspace(0.0, np.pi, 97)[None, :]
        a = np.abs(satsuma_yajima(zs, taus)) ** 2
        b = np.abs(satsuma_yajima(zs, taus + np.pi / 2)) ** 2
        assert np.max(np.abs(a - b)) <= 1e-10

    def test_matches_unscaled_formula(self, rng):
        # same expression without the exp(4|zeta|) factoring, valid for
        # moderate arguments
        for _ in range(200):
            z = rng.uniform(-5, 5)
            tau = rng.uniform(0, 2 * np.pi)
            naive = (
                4.0 * (np.cosh(3 * z) + 3 * np.exp(4j * tau) * np.cosh(z)) * np.exp(0.5j * tau)
                / (np.cosh(4 * z) + 4 * np.cosh(2 * z) + 3 * np.cos(4 * tau))
            )
            assert abs(satsuma_yajima(z, tau) - naive) <= 1e-13


class TestSingleSoliton:
    def test_values(self):
        assert abs(single_soliton(0.0, 0.0) - 1.0) <= 1e-15
        assert abs(single_soliton(0.0, np.pi) - 1j) <= 1e-15

    def test_reduced_equation_residual(self):
        # i Phi_tau + 1/2 Phi_zz + |Phi|^2 Phi = 0 for G = -1, via 4th-order
        # finite differences at (0.7, 0.3)
        z0, tau0, h = 0.7, 0.3, 1e-3
        w1 = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
        o1 = np.array([-2.0, -1.0, 1.0, 2.0])
        w2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
        o2 = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
        phi_tau = np.sum(w1 * single_soliton(z0, tau0 + o1 * h)) / h
        phi_zz = np.sum(w2 * single_soliton(z0 + o2 * h, tau0)) / h**2
        phi = single_soliton(z0, tau0)
        residual = 1j * phi_tau + 0.5 * phi_zz + abs(phi) ** 2 * phi
        assert abs(residual) <= 1e-8

    def test_same_residual_for_breather(self):
        z0, tau0, h = 0.4, 0.6, 1e-3
        w1 = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
        o1 = np.array([-2.0, -1.0, 1.0, 2.0])
        w2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
        o2 = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
        phi_tau = np.sum(w1 * satsuma_yajima(z0, tau0 + o1 * h)) / h
        phi_zz = np.sum(w2 * satsuma_yajima(z0 + o2 * h, tau0)) / h**2
        phi = satsuma_yajima(z0, tau0)
        residual = 1j * phi_tau + 0.5 * phi_zz + abs(phi) ** 2 * phi
        assert abs(residual) <= 1e-6


class TestAssembly:
    def test_free_origin_value(self, free_spec):
        field = breather_field(free_spec)
        val = assemble_psi(field, (0.0, 0.0, 0.0), 0.0)
        assert abs(val - 2.0) <= 1e-14
        assert abs(abs(val) ** 2 - 4.0) <= 1e-13

    def test_free_origin_peak_at_quarter_period(self, free_spec):
        # brute-force scan over t in [0, pi/2]: max 16 at t = pi/4
        field = breather_field(free_spec)
        ts = np.linspace(0.0, np.pi / 2, 20001)
        dens = origin_trace(field, ts)
        i = int(np.argmax(dens))
        assert abs(dens[i] - 16.0) <= 1e-5
        assert abs(ts[i] - np.pi / 4) <= 1e-4

    def test_unit_coefficients_match_plain_expression(self, rng):
        # with cj = 1 the assembled field reduces to the plain shifted-argument
        # formula with zeta = x+y+z and tau = 3t
        spec = constant_scenario(1.0, 1.0, 1.0)
        field = breather_field(spec)
        for _ in range(100):
            x, y, z = rng.uniform(-2.0, 2.0, 3)
            t = rng.uniform(0.0, 2.0)
            u = x + y + z
            expected = (
                4.0 * (np.cosh(3 * u) + 3 * np.exp(12j * t) * np.cosh(u)) * np.exp(1.5j * t)
                / (np.cosh(4 * u) + 4 * np.cosh(2 * u) + 3 * np.cos(12 * t))
            )
            assert abs(field((x, y, z), t) - expected) <= 1e-12

    def test_planar_structure(self, free_spec):
        field = breather_field(free_spec)
        t = 0.8
        a = field((1.0, 0.5, -0.3), t)
        b = field((0.5, -0.3, 1.0), t)  # same x+y+z
        assert abs(a - b) <= 1e-13

    def test_decay_along_zeta(self, harmonic_i_spec):
        field = breather_field(harmonic_i_spec)
        t = 1.0
        vals = [abs(field((x, 0.0, 0.0), t)) for x in (0.0, 5.0, 10.0, 20.0)]
        assert vals[0] > vals[1] > vals[2] > vals[3]
        assert vals[3] <= 1e-9

    def test_finite_everywhere(self, harmonic_ii_spec, rng):
        field = breather_field(harmonic_ii_spec)
        r = tuple(rng.uniform(-50, 50, (3, 64)))
        t = rng.uniform(0.0, 4 * np.pi, 64)
        vals = field(r, t)
        assert np.all(np.isfinite(vals.real)) and np.all(np.isfinite(vals.imag))

    @pytest.mark.parametrize("name", ["free", "harmonic_i", "harmonic_ii", "linear"])
    def test_peak_modulation(self, name, all_presets):
        # max_r |psi|^2 = rho^2 |Phi(0, tau)|^2, scanned along the sheet normal
        spec = all_presets[name]
        field = breather_field(spec)
        from gpbreather.transform import eval_rho, eval_tau, eval_zeta

        for t in np.linspace(0.1, 3.0, 20):
            csum = sum(float(cj(t)) for cj in spec.c[:3])
            c4 = float(spec.c[3](t))
            zetas = np.linspace(-6.0, 6.0, 2001)
            us = (zetas - c4) / csum
            vals = np.abs(field((us, us, us), t)) ** 2
            rho = eval_rho(spec, t)
            tau = eval_tau(spec, t)
            expected = rho**2 * np.abs(satsuma_yajima(0.0, tau)) ** 2
            assert abs(np.max(vals) - expected) <= 1e-9 * max(1.0, expected)

    def test_single_soliton_profile_field(self, free_spec):
        field = breather_field(free_spec, profile="single_soliton")
        val = field((0.0, 0.0, 0.0), 0.0)
        assert abs(val - 1.0) <= 1e-14


class TestPresets:
    def test_unknown_preset(self):
        with pytest.raises(UnknownPreset):
            scenario_preset("nope")

    def test_free_preset_summary(self, free_spec):
        from gpbreather.transform import eval_nonlinearity, eval_potential

        ts = np.linspace(0.0, 2 * np.pi, 20)
        assert np.max(np.abs(eval_nonlinearity(free_spec, ts) + 1.0)) <= 1e-12
        assert eval_potential(free_spec, (1.0, 2.0, 3.0), 1.0) == 0.0
        assert free_spec.G == -1.0
        assert free_spec.time_window == (0.0, 4 * np.pi)

    def test_overrides(self):
        spec = scenario_preset("free", v_convention="paper", time_window=(0.0, 8.0))
        assert spec.v_convention == "paper"
        assert spec.time_window == (0.0, 8.0)

    def test_origin_trace_bounds(self, free_spec):
        field = breather_field(free_spec)
        ts = np.linspace(0.0, 2 * np.pi, 4096)
        trace = origin_trace(field, ts)
        assert abs(trace.max() - 16.0) <= 1e-2
        assert abs(trace.min() - 4.0) <= 1e-2

    def test_trace_frequency_increases_with_c1(self):
        inv = 1.0 / np.sqrt(3.0)
        spacings = []
        ts = np.linspace(0.0, 8.0, 8192)
        for c1 in (0.3, 0.6, 1.0):
            field = breather_field(constant_scenario(c1, inv, inv))
            spacings.append(peak_spacing(ts, origin_trace(field, ts)))
        assert spacings[0] > spacings[1] > spacings[2]
        # spacing tracks the analytic intensity period (pi/2) / tau_t
        for c1, s in zip((0.3, 0.6, 1.0), spacings):
            expected = (np.pi / 2) / (c1**2 + 2.0 / 3.0)
            assert abs(s - expected) <= 0.02 * expected
