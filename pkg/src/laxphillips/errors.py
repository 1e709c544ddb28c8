"""Exception hierarchy shared by all modules."""


class LaxPhillipsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LaxPhillipsError, ValueError):
    """An argument lies outside the domain of the operation."""


class AliasingError(LaxPhillipsError):
    """Discarded coefficient mass exceeded the allowed tolerance."""

    def __init__(self, message, leak, suggested_n=None):
        super().__init__(message)
        self.leak = leak
        self.suggested_n = suggested_n


class PoleError(LaxPhillipsError, ZeroDivisionError):
    """Evaluation requested at a pole of a rational function."""

    def __init__(self, message, pole):
        super().__init__(message)
        self.pole = pole


class TailBoundError(LaxPhillipsError):
    """Truncated line quadrature cannot meet its tolerance."""

    def __init__(self, message, error_estimate, required_half_width):
        super().__init__(message)
        self.error_estimate = error_estimate
        self.required_half_width = required_half_width


class UnsupportedError(LaxPhillipsError, NotImplementedError):
    """The operation is not defined for this kind of input."""


class DiscretizationError(LaxPhillipsError):
    """Numerical residuals contradict an exact identity; carries the residuals."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class NonCommutingError(DiscretizationError):
    """The outgoing and incoming projections were not found to commute."""
