"""Similarity-transform synthesis for the 3D Gross-Pitaevskii equation.

A solution ansatz psi = rho(t) exp(i eta(r,t)) Phi(zeta(r,t), tau(t)) maps

    i psi_t = -1/2 Laplacian(psi) + v(r,t) psi + g(t) |psi|^2 psi

onto the constant-coefficient 1D equation i Phi_tau = -1/2 Phi_zz + G|Phi|^2 Phi
provided the ingredients satisfy

    tau_t = |grad zeta|^2
    zeta_t + grad(eta) . grad(zeta) = 0
    2 rho_t + rho Laplacian(eta) = 0

with zeta affine in space, zeta = c1(t) x + c2(t) y + c3(t) z + c4(t), and eta
a full quadratic form with coefficients d1..d10 (x^2, y^2, z^2, xy, xz, yz,
x, y, z, 1).  The (c, d) pair must satisfy the compatibility ODE system

    c1' + 2 c1 d1 + c2 d4 + c3 d5 = 0        (and cyclic for c2, c3)
    c4' + c1 d7 + c2 d8 + c3 d9 = 0

The potential and nonlinearity that make this work are synthesized here:

    v = -eta_t - 1/2 |grad eta|^2            (v_convention="canonical")
    v = -eta_t -     |grad eta|^2            (v_convention="paper")
    g = G |grad zeta|^2 / rho^2
    rho = exp(-integral of (d1 + d2 + d3))

Substituting the ansatz into the PDE forces the 1/2 factor on |grad eta|^2;
the "paper" convention keeps the full-weight variant that some published
formula tables use, and is retained only for regression against those tables
(the PDE-residual checker in `verify` adjudicates: canonical passes, paper
fails whenever grad eta is nonzero).

All evaluators are pure functions of (r, t); every container is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .errors import ConstraintViolation, DivisionByZeroGauge
from .reports import ResidualReport, make_entry
from .timefunc import Constant, LogDerivative, Power, Sum, TimeFunction

DEFAULT_TIME_WINDOW = (0.0, 4.0 * np.pi)
CONSTRAINT_TOL = 1e-9
CONSTRAINT_SAMPLES = 200

VConvention = Literal["canonical", "paper"]
RhoConvention = Literal["raw_antiderivative", "normalized_at_zero"]

CONSTRAINT_NAMES = ("c1_gauge", "c2_gauge", "c3_gauge", "c4_linear")


@dataclass(frozen=True)
class ScenarioSpec:
    """A complete similarity scenario.

    `c` are the four affine coefficients of the comoving coordinate, `d` the
    ten quadratic-phase coefficients, `G` the coupling of the reduced 1D
    equation.  Constructors that derive `d` (presets, `derive_gauge_d`)
    guarantee the compatibility ODEs hold; `validate()` re-checks them, and
    is deliberately not run automatically so that corrupted scenarios can be
    built for negative tests of the checkers.
    """

    c: tuple[TimeFunction, TimeFunction, TimeFunction, TimeFunction]
    d: tuple[TimeFunction, ...]
    G: float = -1.0
    v_convention: VConvention = "canonical"
    rho_convention: RhoConvention = "raw_antiderivative"
    time_window: tuple[float, float] = DEFAULT_TIME_WINDOW

    def __post_init__(self):
        if len(self.c) != 4:
            raise ValueError("expected 4 affine coefficients")
        if len(self.d) != 10:
            raise ValueError("expected 10 phase coefficients")
        if self.v_convention not in ("canonical", "paper"):
            raise ValueError(f"unknown v_convention {self.v_convention!r}")
        if self.rho_convention not in ("raw_antiderivative", "normalized_at_zero"):
            raise ValueError(f"unknown rho_convention {self.rho_convention!r}")

    def validate(self) -> None:
        """Raise ConstraintViolation if the scenario is degenerate or the
        (c, d) pair violates the compatibility ODEs anywhere on the window."""
        if all(cj.is_zero for cj in self.c[:3]):
            raise ConstraintViolation(
                "c1, c2, c3 all identically zero: tau would be constant and "
                "the reduction degenerates"
            )
        ts = np.linspace(*self.time_window, CONSTRAINT_SAMPLES)
        res = constraint_residuals(self, ts)
        worst = float(np.max(np.abs(res)))
        if worst > CONSTRAINT_TOL:
            raise ConstraintViolation(
                f"compatibility ODE residual {worst:.3e} exceeds {CONSTRAINT_TOL:.1e}"
            )


def derive_gauge_d(
    c: Sequence[TimeFunction],
    linear_d: Sequence[TimeFunction] | None = None,
    time_window: tuple[float, float] = DEFAULT_TIME_WINDOW,
) -> tuple[TimeFunction, ...]:
    """Diagonal-gauge phase coefficients for a given c set.

    Returns d1..d3 = -cj'/(2 cj) (zero for constant cj), d4 = d5 = d6 = 0,
    d7..d9 as supplied (default zero), d10 = 0.  The linear compatibility
    equation c4' + c1 d7 + c2 d8 + c3 d9 = 0 is always checked on a
    200-point sample of the window.

    Raises DivisionByZeroGauge when a time-dependent cj crosses (or touches)
    zero on the window, and ConstraintViolation when the linear equation
    fails, e.g. a drifting c4 without matching d7..d9.
    """
    c = tuple(c)
    if len(c) != 4:
        raise ValueError("expected 4 affine coefficients")
    ts = np.linspace(*time_window, 512)
    diag: list[TimeFunction] = []
    for j, cj in enumerate(c[:3]):
        if cj.derivative().is_zero:
            diag.append(Constant(0.0))
            continue
        vals = np.asarray(cj(ts), dtype=float)
        if np.min(np.abs(vals)) < 1e-12 or np.min(vals) * np.max(vals) < 0.0:
            raise DivisionByZeroGauge(
                f"c{j + 1} crosses zero on the time window while its rate is "
                "nonzero; the diagonal gauge d = -c'/(2c) is singular"
            )
        diag.append(LogDerivative(cj, -0.5))
    zeros = (Constant(0.0), Constant(0.0), Constant(0.0))
    lin = tuple(linear_d) if linear_d is not None else zeros
    if len(lin) != 3:
        raise ValueError("linear_d must supply exactly d7, d8, d9")
    d = (*diag, *zeros, *lin, Constant(0.0))

    ts2 = np.linspace(*time_window, CONSTRAINT_SAMPLES)
    resid = c[3].derivative()(ts2) + sum(c[j](ts2) * lin[j](ts2) for j in range(3))
    worst = float(np.max(np.abs(resid)))
    if worst > CONSTRAINT_TOL:
        raise ConstraintViolation(
            f"linear compatibility residual {worst:.3e} exceeds {CONSTRAINT_TOL:.1e}; "
            "a time-dependent c4 requires matching d7..d9 "
            "(e.g. dj = -c4'/(3 cj) for equal splitting)"
        )
    return d


def constraint_residuals(spec: ScenarioSpec, t) -> np.ndarray:
    """Residuals of the four compatibility ODEs, shape (4,) + shape(t).

    Derivatives of c come from the exact expression trees, so a clean
    scenario sits at roundoff level."""
    t = np.asanyarray(t)
    c1, c2, c3, c4 = (cj(t) for cj in spec.c)
    cd1, cd2, cd3, cd4 = (cj.derivative()(t) for cj in spec.c)
    d = [dj(t) for dj in spec.d]
    return np.stack([
        cd1 + 2.0 * c1 * d[0] + c2 * d[3] + c3 * d[4],
        cd2 + c1 * d[3] + 2.0 * c2 * d[1] + c3 * d[5],
        cd3 + c1 * d[4] + c2 * d[5] + 2.0 * c3 * d[2],
        cd4 + c1 * d[6] + c2 * d[7] + c3 * d[8],
    ])


def check_constraints(spec: ScenarioSpec, t_samples) -> ResidualReport:
    """Constraint residual statistics over the given times (a report, never
    a rejection; use ScenarioSpec.validate for the hard gate)."""
    ts = np.asarray(t_samples, dtype=float)
    res = constraint_residuals(spec, ts)
    entries = tuple(
        make_entry(name, res[k], None, ts) for k, name in enumerate(CONSTRAINT_NAMES)
    )
    return ResidualReport(entries=entries, sample_count=ts.size)


# --- pointwise evaluators ---------------------------------------------------


def eval_zeta(spec: ScenarioSpec, r, t):
    """zeta(r, t) = c1 x + c2 y + c3 z + c4."""
    x, y, z = r
    return spec.c[0](t) * x + spec.c[1](t) * y + spec.c[2](t) * z + spec.c[3](t)


def tau_rate(spec: ScenarioSpec) -> TimeFunction:
    """tau_t = c1^2 + c2^2 + c3^2 as a TimeFunction."""
    return Sum(tuple(Power(cj, 2) for cj in spec.c[:3]))


def eval_tau(spec: ScenarioSpec, t):
    """tau(t) = integral from 0 to t of (c1^2 + c2^2 + c3^2).

    Exact via the trig-polynomial antiderivative for the harmonic family,
    adaptive quadrature (tolerance 1e-10) otherwise; tau(0) = 0 always.
    """
    return tau_rate(spec).integral(0.0, t)


_ETA_QUAD = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))


def eval_eta(spec: ScenarioSpec, r, t):
    """Full quadratic phase d1 x^2 + d2 y^2 + d3 z^2 + d4 xy + d5 xz + d6 yz
    + d7 x + d8 y + d9 z + d10."""
    return _eta_from_coeffs([dj(t) for dj in spec.d], r)


def _eta_from_coeffs(dv, r):
    x, y, z = r
    return (
        dv[0] * x * x + dv[1] * y * y + dv[2] * z * z
        + dv[3] * x * y + dv[4] * x * z + dv[5] * y * z
        + dv[6] * x + dv[7] * y + dv[8] * z + dv[9]
    )


def _rho_exponent(spec: ScenarioSpec, t):
    """Value of integral(d1 + d2 + d3) under the scenario's convention."""
    trace = Sum(spec.d[:3])
    if spec.rho_convention == "raw_antiderivative":
        val = trace.antiderivative(t)
        if val is not None:
            return val
        # no closed form: fall back to the definite integral from 0, which
        # coincides with the normalized convention
        return trace.integral(0.0, t)
    return trace.integral(0.0, t)


def eval_rho(spec: ScenarioSpec, t):
    """Amplitude factor rho(t) = exp(-integral(d1 + d2 + d3)).

    raw_antiderivative uses the natural antiderivative with zero integration
    constant (so closed forms come out as plain powers of the cj);
    normalized_at_zero integrates from 0, giving rho(0) = 1.  Both choices
    pair with the matching g(t) to produce valid solutions.
    """
    return np.exp(-_rho_exponent(spec, t))


def eval_nonlinearity(spec: ScenarioSpec, t):
    """g(t) = G |grad zeta|^2 / rho^2, with rho under the scenario convention."""
    rate = tau_rate(spec)(t)
    rho = eval_rho(spec, t)
    return spec.G * rate / (rho * rho)


def _d_values(spec: ScenarioSpec, t):
    return [dj(t) for dj in spec.d]


def _d_dot_values(spec: ScenarioSpec, t):
    return [dj.derivative()(t) for dj in spec.d]


def grad_eta(spec: ScenarioSpec, r, t):
    """Closed-form spatial gradient of eta."""
    x, y, z = r
    d = _d_values(spec, t)
    gx = 2.0 * d[0] * x + d[3] * y + d[4] * z + d[6]
    gy = d[3] * x + 2.0 * d[1] * y + d[5] * z + d[7]
    gz = d[4] * x + d[5] * y + 2.0 * d[2] * z + d[8]
    return gx, gy, gz


def laplacian_eta(spec: ScenarioSpec, t):
    d = _d_values(spec, t)
    return 2.0 * (d[0] + d[1] + d[2])


def eval_potential(spec: ScenarioSpec, r, t):
    """v(r, t) = -eta_t - w |grad eta|^2, w = 1/2 (canonical) or 1 (paper).

    eta_t comes from the exact derivative trees of the d coefficients and
    grad eta from the closed form; no numerical differentiation anywhere.
    """
    ddot = _d_dot_values(spec, t)
    eta_t = _eta_from_coeffs(ddot, r)
    gx, gy, gz = grad_eta(spec, r, t)
    grad2 = gx * gx + gy * gy + gz * gz
    w = 0.5 if spec.v_convention == "canonical" else 1.0
    return -eta_t - w * grad2


def potential_coefficients(spec: ScenarioSpec, t, table: str | None = None) -> np.ndarray:
    """Diagnostic table of quadratic-potential coefficients omega_1..omega_10.

    The potential is v = -(omega_1 x^2 + ... + omega_6 yz + omega_7 x + ...
    + omega_10); this is a derived view, not the computation path of
    eval_potential (the two are cross-checked in tests).

    table: "canonical" (default; 1/2-weight gradient terms), "paper"
    (full-weight gradient terms), or "printed" (the legacy tabulation:
    full-weight quadratic rows, but linear/constant rows reduced to the bare
    d-rates, valid only when d1..d6 vanish).
    """
    if table is None:
        table = spec.v_convention
    if table not in ("canonical", "paper", "printed"):
        raise ValueError(f"unknown table {table!r}")
    d = np.asarray(_d_values(spec, np.asanyarray(t)))
    dd = np.asarray(_d_dot_values(spec, np.asanyarray(t)))
    d1, d2, d3, d4, d5, d6, d7, d8, d9, _ = d
    w = 0.5 if table == "canonical" else 1.0
    quad = np.stack([
        dd[0] + w * (4 * d1 * d1 + d4 * d4 + d5 * d5),
        dd[1] + w * (d4 * d4 + 4 * d2 * d2 + d6 * d6),
        dd[2] + w * (d5 * d5 + d6 * d6 + 4 * d3 * d3),
        dd[3] + w * (4 * d1 * d4 + 4 * d2 * d4 + 2 * d5 * d6),
        dd[4] + w * (4 * d1 * d5 + 4 * d3 * d5 + 2 * d4 * d6),
        dd[5] + w * (2 * d4 * d5 + 4 * d2 * d6 + 4 * d3 * d6),
    ])
    if table == "printed":
        lin = np.stack([dd[6], dd[7], dd[8], dd[9]])
    else:
        lin = np.stack([
            dd[6] + w * (4 * d1 * d7 + 2 * d4 * d8 + 2 * d5 * d9),
            dd[7] + w * (2 * d4 * d7 + 4 * d2 * d8 + 2 * d6 * d9),
            dd[8] + w * (2 * d5 * d7 + 2 * d6 * d8 + 4 * d3 * d9),
            dd[9] + w * (d7 * d7 + d8 * d8 + d9 * d9),
        ])
    return np.concatenate([quad, lin])


# --- bundled evaluators -----------------------------------------------------


@dataclass(frozen=True)
class TransformBundle:
    """Callable evaluators for every similarity-transform ingredient.

    All members are pure functions; `grad_zeta`, `grad_eta_fn` and
    `laplacian_eta_fn` expose the closed-form spatial derivatives that the
    reduction checker pairs with finite-difference time derivatives.
    """

    spec: ScenarioSpec = field(repr=False)
    tau: Callable = field(repr=False)
    zeta: Callable = field(repr=False)
    eta: Callable = field(repr=False)
    rho: Callable = field(repr=False)
    potential: Callable = field(repr=False)
    nonlinearity: Callable = field(repr=False)
    grad_zeta: Callable = field(repr=False)
    grad_eta_fn: Callable = field(repr=False)
    laplacian_eta_fn: Callable = field(repr=False)

    @property
    def potential_is_zero(self) -> bool:
        return all(dj.is_zero for dj in self.spec.d)


def transform_bundle(spec: ScenarioSpec) -> TransformBundle:
    """Build the evaluator bundle for a scenario."""

    def _grad_zeta(t):
        return spec.c[0](t), spec.c[1](t), spec.c[2](t)

    return TransformBundle(
        spec=spec,
        tau=lambda t: eval_tau(spec, t),
        zeta=lambda r, t: eval_zeta(spec, r, t),
        eta=lambda r, t: eval_eta(spec, r, t),
        rho=lambda t: eval_rho(spec, t),
        potential=lambda r, t: eval_potential(spec, r, t),
        nonlinearity=lambda t: eval_nonlinearity(spec, t),
        grad_zeta=_grad_zeta,
        grad_eta_fn=lambda r, t: grad_eta(spec, r, t),
        laplacian_eta_fn=lambda t: laplacian_eta(spec, t),
    )
