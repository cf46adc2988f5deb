"""Exception types raised across the package."""


class DiscDomainError(ValueError):
    """A point or parameter lies outside the region where it is defined."""


class DegenerateInputError(ValueError):
    """Input too small or too degenerate for the requested quantity."""


class SequenceFormatError(ValueError):
    """Malformed sequence file.

    ``location`` names the line or field at fault.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class CriticalPointError(ArithmeticError):
    """Derivative vanishes where a nonvanishing one is required."""


class InterpolationError(RuntimeError):
    """Interpolation system could not be solved to the residual bound."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class ConstructionError(RuntimeError):
    """Built coefficient does not satisfy the ODE identity."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class StepSizeError(RuntimeError):
    """Adaptive integrator step size underflowed."""


class ContourError(RuntimeError):
    """Contour passes too close to a zero of the solution."""


class AccuracyError(RuntimeError):
    """Argument-principle integral is not close enough to an integer."""


class PathThroughZeroError(RuntimeError):
    """Integration path for a reduction-of-order integral meets a zero."""


class PreconditionError(ValueError):
    """An operation's numerical precondition fails."""


class QuadratureError(RuntimeError):
    """Quadrature refinements disagree beyond the accepted tolerance."""
