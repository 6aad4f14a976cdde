"""Exception types raised across the library."""


class UavsecError(Exception):
    """Base class for all library-specific errors."""


class NonFiniteError(UavsecError):
    """An input contained NaN or infinity."""


class DimensionMismatchError(UavsecError):
    """Array shapes are inconsistent with the configured antenna/element counts."""


class SingularPencilError(UavsecError):
    """The denominator matrix of a pencil is not positive definite to tolerance."""


class NoSignChangeError(UavsecError):
    """Root bracketing failed: no sign change even after bracket expansion."""


class OutOfRangeError(UavsecError):
    """A scalar argument is outside the model's validity range."""


class DegenerateGeometryError(UavsecError):
    """Two nodes coincide, leaving an angle or distance undefined."""


class InfeasibleRateError(UavsecError):
    """The minimum-rate constraint cannot be met even at full transmit power."""


class InfeasibleStartError(UavsecError):
    """The starting point violates the minimum-rate constraint."""


class BoxViolationError(UavsecError):
    """The starting point lies outside the placement search box."""


class ConfigError(UavsecError):
    """A sweep configuration file failed to parse or validate."""


class SchemaError(UavsecError):
    """A results or summary file does not match the expected schema."""


class MissingAxisError(UavsecError):
    """The requested sweep axis is absent from the summary data."""
