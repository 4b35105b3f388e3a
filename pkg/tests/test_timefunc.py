"""Exactness checks for the time-function algebra.

Derivatives are verified against central finite differences and closed-form
integrals against adaptive quadrature, per function kind.
"""

import numpy as np
import pytest
from scipy import integrate

from gpbreather.errors import QuadratureFailure
from gpbreather.timefunc import (
    Constant,
    Harmonic,
    LogDerivative,
    Power,
    Product,
    Quotient,
    Sum,
)


def _family():
    h1 = Harmonic(1.0, 0.5, 1.0, 0.0)
    h2 = Harmonic(0.3, 0.2, 2.0, 0.7)
    return {
        "constant": Constant(2.5),
        "harmonic": h1,
        "sum": Sum((h1, h2, Constant(-0.4))),
        "product": Product(h1, h2),
        "power": Power(h1, 3),
        "quotient": Quotient(h2, h1),
        "log_derivative": LogDerivative(h1, -0.5),
    }


@pytest.mark.parametrize("kind", sorted(_family()))
def test_derivative_matches_finite_difference(kind, rng):
    f = _family()[kind]
    fp = f.derivative()
    h = 1e-6
    for t in rng.uniform(0.0, 2.0 * np.pi, 100):
        fd = (f(t + h) - f(t - h)) / (2.0 * h)
        exact = fp(t)
        assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


@pytest.mark.parametrize("kind", sorted(_family()))
def test_integral_matches_quadrature(kind, rng):
    f = _family()[kind]
    for t in rng.uniform(0.1, 2.0 * np.pi, 10):
        ref, err = integrate.quad(f, 0.0, t, epsabs=1e-13, epsrel=1e-13, limit=300)
        assert err < 1e-11
        assert abs(f.integral(0.0, t) - ref) <= 1e-10


def test_finite_on_window(rng):
    ts = rng.uniform(0.0, 4.0 * np.pi, 50)
    for f in _family().values():
        assert np.all(np.isfinite(f(ts)))
        assert np.all(np.isfinite(f.derivative()(ts)))
        assert np.isfinite(f.integral(0.0, 4.0 * np.pi))


def test_squared_harmonic_closed_form():
    # (1 + 0.5 cos t)^2 integrates to 1.125 t + sin t + sin t cos t / 8
    f = Power(Harmonic(1.0, 0.5, 1.0, 0.0), 2)
    assert f.has_closed_antiderivative
    for t in np.linspace(0.0, 7.0, 29):
        expected = 1.125 * t + np.sin(t) + np.sin(t) * np.cos(t) / 8.0
        assert abs(f.integral(0.0, t) - expected) <= 1e-12


def test_log_derivative_antiderivative():
    c = Harmonic(1.0, 0.5, 1.0, 0.0)
    d = LogDerivative(c, -0.5)
    for t in (0.0, 0.3, 1.7, 4.0):
        assert abs(d.antiderivative(t) - (-0.5) * np.log(c(t))) <= 1e-15
    # value is -c'/(2c)
    t = 1.3
    assert abs(d(t) - 0.25 * np.sin(t) / (1.0 + 0.5 * np.cos(t))) <= 1e-15


def test_sum_antiderivative_mixes_kinds():
    c = Harmonic(2.0, 0.5, 1.0, 0.0)
    f = Sum((LogDerivative(c, -0.5), Constant(0.0), Harmonic(0.1, 0.0, 0.0, 0.0)))
    t = 2.2
    expected = -0.5 * np.log(c(t)) + 0.1 * t
    assert abs(f.antiderivative(t) - expected) <= 1e-14


def test_is_zero_structural():
    assert Constant(0.0).is_zero
    assert not Constant(1.0).is_zero
    assert Harmonic(0.0, 0.0, 3.0, 0.2).is_zero
    assert not Harmonic(0.0, 0.1, 3.0, 0.2).is_zero
    assert Sum((Constant(0.0), Constant(0.0))).is_zero
    assert Product(Constant(0.0), Harmonic(1.0, 1.0, 1.0)).is_zero
    assert LogDerivative(Constant(4.0), -0.5).is_zero
    assert not LogDerivative(Harmonic(1.0, 0.5, 1.0), -0.5).is_zero


def test_constant_derivative_of_harmonic_detected():
    flat = Harmonic(1.0, 0.0, 1.0, 0.0)
    assert flat.derivative().is_zero
    frozen = Harmonic(1.0, 0.5, 0.0, 0.0)
    assert frozen.derivative().is_zero


def test_dtype_passthrough():
    f = Product(Harmonic(1.0, 0.5, 1.0, 0.0), Harmonic(0.3, 0.2, 2.0, 0.7))
    t = np.linspace(0, 1, 5, dtype=np.longdouble)
    assert f(t).dtype == np.longdouble
    assert f.derivative()(t).dtype == np.longdouble
    assert Constant(2.0)(t).dtype == np.longdouble


@pytest.mark.filterwarnings("ignore::UserWarning")
@pytest.mark.filterwarnings("ignore:The integral is probably divergent")
def test_quadrature_failure_on_pathological_integrand():
    # a quotient has no closed form, and the wild oscillation defeats quad
    wild = Quotient(Harmonic(0.0, 1.0, 5e7, 0.3), Constant(1.0))
    assert wild.trig_atoms() is None
    with pytest.raises(QuadratureFailure):
        wild.integral(0.0, 2.0 * np.pi)


def test_quadrature_fallback_for_quotient():
    f = Quotient(Harmonic(0.3, 0.2, 2.0, 0.7), Harmonic(1.0, 0.5, 1.0, 0.0))
    assert f.trig_atoms() is None
    ref, _ = integrate.quad(f, 0.0, 1.5, epsabs=1e-13, epsrel=1e-13)
    assert abs(f.integral(0.0, 1.5) - ref) <= 1e-10
