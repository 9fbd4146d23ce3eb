"""Exception types raised by momentkit."""


class MomentkitError(Exception):
    """Base class for all library errors."""


class SlitViolation(MomentkitError, ValueError):
    """Evaluation point lies on or too close to the cut [1, inf)."""

    def __init__(self, z: complex, distance: float, guard: float):
        super().__init__(
            f"z={z!r} is {distance:.3g} from the slit [1, inf); guard is {guard:.1e}"
        )
        self.z = z
        self.distance = distance


class QuadratureError(MomentkitError, ArithmeticError):
    """A quadrature rule failed to reach its tolerance."""

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (attained error estimate {estimate:.3e})")
        self.estimate = estimate


class InsufficientPrecision(MomentkitError, ArithmeticError):
    """A truncated series cannot certify the requested accuracy."""

    def __init__(self, message: str, bound: float):
        super().__init__(f"{message} (tail bound {bound:.3e})")
        self.bound = bound


class DegeneratePoint(MomentkitError, ZeroDivisionError):
    """A closed-form expression has a vanishing denominator at this point."""


class HypothesisGateFailure(MomentkitError):
    """A theorem's hypothesis does not hold for the supplied input."""


class EvaluationError(MomentkitError):
    """Numerical failure inside a verification sweep, with its parameters."""

    def __init__(self, message: str, params: dict):
        detail = ", ".join(f"{k}={v!r}" for k, v in params.items())
        super().__init__(f"{message} at {detail}")
        self.params = params
