"""Exception types shared across the package."""


class TacnetError(Exception):
    """Base class for all package-specific errors."""


class InvalidSizeError(TacnetError, ValueError):
    """Instance size below the supported minimum."""


class InstanceParseError(TacnetError, ValueError):
    """An instance file is malformed; message carries file/field context."""


class InvalidRootError(TacnetError, ValueError):
    """Requested tree root is not a node of the instance."""


class InfeasiblePartitionError(TacnetError, ValueError):
    """Hub children cannot be split into two groups within the PMP limit."""


class InfeasibleInstanceError(TacnetError, RuntimeError):
    """No design satisfying the structure limits could be constructed."""


class DomainError(TacnetError, ValueError):
    """Numeric argument outside the mathematical domain of an operation."""


class ConfigurationError(TacnetError, ValueError):
    """Inconsistent configuration object (e.g. unnormalized weights)."""


class UndefinedBaselineError(TacnetError, ZeroDivisionError):
    """Relative change against a zero baseline value."""


class DimensionError(TacnetError, ValueError):
    """Matrix/sample dimensions too small or inconsistent for a test."""
