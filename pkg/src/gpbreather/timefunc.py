"""Closed-form algebra of scalar time functions.

Every coefficient that enters the similarity construction (the affine
coefficients c_j(t) of the comoving coordinate and the quadratic-phase
coefficients d_j(t)) is represented by a small expression tree built from:

    Constant(a)                 a
    Harmonic(a, b, w, phi)      a + b*cos(w*t + phi)
    Sum(terms)                  f1 + f2 + ...
    Product(left, right)        f * g
    Power(base, n)              f**n           (integer n)
    Quotient(numer, denom)      f / g
    LogDerivative(inner, k)     k * f'(t) / f(t)

The point of the tree (instead of plain callables) is exactness:
`derivative()` returns another tree obtained by symbolic chain rules, and
definite integrals use closed-form antiderivatives whenever the node can be
flattened to a trigonometric polynomial (or is a log-derivative, whose
antiderivative is k*log|f|).  Constraint checks downstream therefore never
rely on numerical differentiation.  Adaptive quadrature is the fallback for
the few shapes without a closed form.

All evaluations are plain numpy expressions, so array and extended-precision
(`np.longdouble`) arguments pass straight through.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import QuadratureFailure

# Atom = (amplitude, angular frequency, phase) meaning A*cos(w*t + phi).
TrigAtom = tuple[float, float, float]

QUAD_TOL = 1e-10


class TimeFunction:
    """Base class: a scalar function of time with exact derivative trees."""

    def __call__(self, t):
        raise NotImplementedError

    def _derivative(self) -> "TimeFunction":
        raise NotImplementedError

    @functools.cache
    def derivative(self) -> "TimeFunction":
        """Exact derivative as a new expression tree."""
        return self._derivative()

    def trig_atoms(self) -> list[TrigAtom] | None:
        """Flatten to a list of A*cos(w*t+phi) atoms, or None if impossible."""
        return None

    @property
    def is_zero(self) -> bool:
        """Structurally identically zero (sufficient, not necessary)."""
        return False

    def antiderivative(self, t):
        """Closed-form antiderivative value at t, or None if unavailable.

        The integration constant is the natural one for each closed form
        (zero added constant): trig atoms integrate to (A/w)*sin(w*t+phi)
        plus A0*t, and log-derivatives to k*log|f(t)|.  This "raw" choice is
        what makes downstream amplitude factors match textbook-style printed
        expressions; callers wanting a definite integral subtract the value
        at the lower limit.
        """
        atoms = self.trig_atoms()
        if atoms is None:
            return None
        return _trig_antiderivative(atoms, t)

    @property
    def has_closed_antiderivative(self) -> bool:
        return self.antiderivative(0.0) is not None

    def integral(self, t0: float, t1):
        """Definite integral from t0 to t1 (t1 may be an array).

        Uses the closed-form antiderivative when available, otherwise
        adaptive quadrature per endpoint, raising QuadratureFailure when the
        estimated error exceeds the 1e-10 tolerance.
        """
        lower = self.antiderivative(t0)
        if lower is not None:
            return self.antiderivative(t1) - lower
        t1_arr = np.asarray(t1, dtype=float)
        flat = np.atleast_1d(t1_arr).ravel()
        vals = np.empty(flat.shape, dtype=float)
        for i, tb in enumerate(flat):
            val, err = integrate.quad(self, t0, tb, epsabs=1e-12, epsrel=1e-12, limit=300)
            if err > QUAD_TOL:
                raise QuadratureFailure(
                    f"quadrature error estimate {err:.3e} exceeds {QUAD_TOL:.1e} "
                    f"on [{t0}, {tb}]"
                )
            vals[i] = val
        if t1_arr.ndim == 0:
            return float(vals[0])
        return vals.reshape(t1_arr.shape)


def _trig_antiderivative(atoms: list[TrigAtom], t):
    total = 0.0 * np.asanyarray(t)
    for amp, w, phi in atoms:
        if amp == 0.0:
            continue
        if w == 0.0:
            total = total + amp * np.cos(phi) * np.asanyarray(t)
        else:
            total = total + (amp / w) * np.sin(w * np.asanyarray(t) + phi)
    return total


def _normalize_atom(amp: float, w: float, phi: float) -> TrigAtom:
    if w < 0.0:
        # cos(-w*t + phi) = cos(w*t - phi)
        return (amp, -w, -phi)
    return (amp, w, phi)


def _product_atoms(la: list[TrigAtom], ra: list[TrigAtom]) -> list[TrigAtom]:
    """Atoms of the product of two trig polynomials (product-to-sum rule)."""
    atoms: list[TrigAtom] = []
    for a1, w1, p1 in la:
        for a2, w2, p2 in ra:
            amp = 0.5 * a1 * a2
            if amp == 0.0:
                continue
            # cos X cos Y = (cos(X+Y) + cos(X-Y)) / 2
            atoms.append(_normalize_atom(amp, w1 + w2, p1 + p2))
            atoms.append(_normalize_atom(amp, w1 - w2, p1 - p2))
    return atoms


@dataclass(frozen=True)
class Constant(TimeFunction):
    value: float

    def __call__(self, t):
        return self.value + 0.0 * np.asanyarray(t)

    def _derivative(self):
        return Constant(0.0)

    def trig_atoms(self):
        return [(self.value, 0.0, 0.0)]

    @property
    def is_zero(self):
        return self.value == 0.0


@dataclass(frozen=True)
class Harmonic(TimeFunction):
    """offset + amplitude * cos(omega * t + phase)."""

    offset: float
    amplitude: float
    omega: float
    phase: float = 0.0

    def __call__(self, t):
        return self.offset + self.amplitude * np.cos(self.omega * np.asanyarray(t) + self.phase)

    def _derivative(self):
        amp = -self.amplitude * self.omega
        if amp == 0.0:
            return Constant(0.0)
        # d/dt cos(wt+phi) = -w sin(wt+phi) = -w cos(wt + phi - pi/2)
        return Harmonic(0.0, amp, self.omega, self.phase - np.pi / 2.0)

    def trig_atoms(self):
        if self.omega == 0.0 or self.amplitude == 0.0:
            return [(self.offset + self.amplitude * np.cos(self.phase), 0.0, 0.0)]
        return [(self.offset, 0.0, 0.0), _normalize_atom(self.amplitude, self.omega, self.phase)]

    @property
    def is_zero(self):
        return self.offset == 0.0 and self.amplitude == 0.0


@dataclass(frozen=True)
class Sum(TimeFunction):
    terms: tuple[TimeFunction, ...]

    def __call__(self, t):
        total = 0.0 * np.asanyarray(t)
        for f in self.terms:
            total = total + f(t)
        return total

    def _derivative(self):
        return Sum(tuple(f.derivative() for f in self.terms))

    def trig_atoms(self):
        atoms: list[TrigAtom] = []
        for f in self.terms:
            sub = f.trig_atoms()
            if sub is None:
                return None
            atoms.extend(sub)
        return atoms

    @property
    def is_zero(self):
        return all(f.is_zero for f in self.terms)

    def antiderivative(self, t):
        closed = super().antiderivative(t)
        if closed is not None:
            return closed
        total = 0.0 * np.asanyarray(t)
        for f in self.terms:
            part = f.antiderivative(t)
            if part is None:
                return None
            total = total + part
        return total


@dataclass(frozen=True)
class Product(TimeFunction):
    left: TimeFunction
    right: TimeFunction

    def __call__(self, t):
        return self.left(t) * self.right(t)

    def _derivative(self):
        return Sum((
            Product(self.left.derivative(), self.right),
            Product(self.left, self.right.derivative()),
        ))

    def trig_atoms(self):
        la = self.left.trig_atoms()
        ra = self.right.trig_atoms()
        if la is None or ra is None:
            return None
        return _product_atoms(la, ra)

    @property
    def is_zero(self):
        return self.left.is_zero or self.right.is_zero

    def antiderivative(self, t):
        closed = super().antiderivative(t)
        if closed is not None:
            return closed
        # constant * f still integrates if f does
        if isinstance(self.left, Constant):
            part = self.right.antiderivative(t)
            return None if part is None else self.left.value * part
        if isinstance(self.right, Constant):
            part = self.left.antiderivative(t)
            return None if part is None else self.right.value * part
        return None


@dataclass(frozen=True)
class Power(TimeFunction):
    base: TimeFunction
    exponent: int

    def __call__(self, t):
        return self.base(t) ** self.exponent

    def _derivative(self):
        n = self.exponent
        if n == 0:
            return Constant(0.0)
        inner = self.base if n == 2 else Power(self.base, n - 1)
        return Product(Constant(float(n)), Product(inner, self.base.derivative()))

    def trig_atoms(self):
        if self.exponent < 0:
            return None
        if self.exponent == 0:
            return [(1.0, 0.0, 0.0)]
        atoms = self.base.trig_atoms()
        if atoms is None:
            return None
        result = atoms
        for _ in range(self.exponent - 1):
            result = _product_atoms(result, atoms)
        return result

    @property
    def is_zero(self):
        return self.exponent > 0 and self.base.is_zero


@dataclass(frozen=True)
class Quotient(TimeFunction):
    numer: TimeFunction
    denom: TimeFunction

    def __call__(self, t):
        return self.numer(t) / self.denom(t)

    def _derivative(self):
        f, g = self.numer, self.denom
        return Quotient(
            Sum((
                Product(f.derivative(), g),
                Product(Constant(-1.0), Product(f, g.derivative())),
            )),
            Power(g, 2),
        )

    @property
    def is_zero(self):
        return self.numer.is_zero


@dataclass(frozen=True)
class LogDerivative(TimeFunction):
    """coefficient * f'(t)/f(t); antiderivative coefficient * log|f(t)|.

    This is the shape of the diagonal-gauge quadratic-phase coefficients
    d_j = -c_j'/(2 c_j), and its exact antiderivative is what turns the
    amplitude factor exp(-integral) into a clean power of c_j.
    """

    inner: TimeFunction
    coefficient: float

    def __call__(self, t):
        return self.coefficient * self.inner.derivative()(t) / self.inner(t)

    def _derivative(self):
        f = self.inner
        fp = f.derivative()
        return Product(
            Constant(self.coefficient),
            Quotient(
                Sum((
                    Product(fp.derivative(), f),
                    Product(Constant(-1.0), Product(fp, fp)),
                )),
                Power(f, 2),
            ),
        )

    @property
    def is_zero(self):
        return self.coefficient == 0.0 or self.inner.derivative().is_zero

    def antiderivative(self, t):
        return self.coefficient * np.log(np.abs(self.inner(t)))


def scaled(f: TimeFunction, k: float) -> TimeFunction:
    """k * f, folding the constant case."""
    if isinstance(f, Constant):
        return Constant(k * f.value)
    return Product(Constant(k), f)
