"""Exception and warning types shared across the package."""


class GsleError(Exception):
    """Base class for all package errors."""


class InvalidField(GsleError):
    """Field samples are non-finite or inconsistent with the grid."""


class UnsupportedOrder(GsleError):
    """Derivative order outside the supported set."""


class DegenerateState(GsleError):
    """Wavefunction has (numerically) zero norm."""


class OutOfDomain(GsleError):
    """Evaluation point outside a tabulated coupling's range."""


class NonmonotonePotential(GsleError):
    """V'(x) < 0 somewhere, so the GUP coupling integral is undefined."""


class EmptyBath(GsleError):
    """Bath discretization requested with zero oscillators."""


class InvalidFriction(GsleError):
    """Negative friction constant."""


class InvalidResolution(GsleError):
    """Negative measurement resolution kappa."""


class NumericalBlowup(GsleError):
    """NaN/Inf appeared during propagation.

    Carries the time of failure and the last stable observables when
    available.
    """

    def __init__(self, message, t=None, last_observables=None):
        super().__init__(message)
        self.t = t
        self.last_observables = last_observables


class InsufficientData(GsleError):
    """Not enough samples/snapshots for the requested analysis."""


class MemoryBudgetExceeded(GsleError):
    """GLE history buffer grew past its configured cap."""


class ConfigError(GsleError):
    """Invalid or unknown configuration content."""


class BoundaryContamination(UserWarning):
    """Probability density has reached the edge of the periodic box."""


class StabilityWarning(UserWarning):
    """dt * max|U| / hbar exceeds the stability guard."""


class NormalizationWarning(UserWarning):
    """State used where a normalized one was expected."""
