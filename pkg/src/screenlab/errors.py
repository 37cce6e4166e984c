"""Exception types shared across screenlab."""


class ScreenLabError(Exception):
    """Base class for all screenlab errors."""


class DomainError(ScreenLabError, ValueError):
    """Argument outside the domain of an operation."""


class DegenerateArcError(ScreenLabError, ValueError):
    """Arc fails regularity, injectivity or endpoint checks."""


class UnsupportedArcError(ScreenLabError, ValueError):
    """Arc kind not supported by the requested operation."""


class NearBoundaryError(ScreenLabError, ValueError):
    """Evaluation point lies on (or numerically on) the screen."""


class BranchCutError(DomainError):
    """Point lies on a branch cut of a multivalued function."""


class GeometryError(ScreenLabError, ValueError):
    """Incompatible geometric configuration, e.g. arc not inside a circle."""


class FitError(ScreenLabError, ValueError):
    """Power-law fit cannot be performed on the given samples."""


class NonMonotoneError(FitError):
    """Samples change sign."""


class InsufficientRangeError(FitError):
    """Distances span fewer than two decades."""


class SolverError(ScreenLabError, RuntimeError):
    """Linear solve failed or produced an unusable result."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class DegenerateCapacityError(SolverError):
    """Arc of logarithmic capacity one: the Robin constant vanishes."""


class ConfigError(ScreenLabError, ValueError):
    """Malformed or incomplete run configuration."""


class IllConditioningWarning(UserWarning):
    """Discrete operator has a large condition number."""


class VanishingAmplitudeWarning(UserWarning):
    """Endpoint amplitude numerically zero."""
