"""Exception types shared across the package."""


class GPBreatherError(Exception):
    """Base class for all package-specific errors."""


class DivisionByZeroGauge(GPBreatherError):
    """A coefficient crosses zero on the time window while its rate is nonzero,
    so the diagonal quadratic-phase gauge d = -c'/(2c) would blow up."""


class ConstraintViolation(GPBreatherError):
    """A coefficient set does not satisfy the compatibility ODE system."""


class QuadratureFailure(GPBreatherError):
    """Adaptive quadrature could not reach the requested tolerance."""


class UnknownPreset(GPBreatherError):
    """Requested scenario preset name is not defined."""


class StencilOutOfWindow(GPBreatherError):
    """A finite-difference stencil would sample outside the scenario time window."""


class NonFiniteDetected(GPBreatherError):
    """The evolving field picked up a NaN or infinity."""

    def __init__(self, step_index: int, message: str | None = None):
        self.step_index = step_index
        super().__init__(message or f"non-finite field values at step {step_index}")


class GeometryMismatch(GPBreatherError):
    """Two grids that must share geometry do not."""


class ConfigError(GPBreatherError):
    """Malformed or inconsistent configuration input."""
