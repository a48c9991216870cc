"""Exception hierarchy shared by every module of the package."""


class SuperoptError(Exception):
    """Base class for all errors raised by :mod:`superopt`."""


class ConfigurationError(SuperoptError, ValueError):
    """Invalid solver or grid configuration."""


class SymbolError(SuperoptError, ValueError):
    """Malformed or invalid symbol document."""


class NumericalError(SuperoptError, ArithmeticError):
    """A numerical step failed to meet its accuracy contract."""


class AliasingError(NumericalError):
    """Coefficient mass reached the edge of the Fourier window."""


class TruncationError(NumericalError):
    """The truncation order is too small for the requested accuracy.

    Attributes
    ----------
    decay_rate : float or None
        Estimated geometric decay rate of the relevant coefficients.
    """

    def __init__(self, message, decay_rate=None):
        super().__init__(message)
        self.decay_rate = decay_rate


class DegenerateOuterError(NumericalError):
    """A modulus profile vanishes (numerically) on the circle."""


class NotPSDError(NumericalError):
    """A Gram matrix has a significantly negative eigenvalue."""


class InterpolantError(NumericalError):
    """No analytic interpolant met the residual tolerance."""
