"""Exception types. CLI exit codes map onto these: 2 for ConfigError, 3 for
ContractViolation and its subclasses."""


class HolonomicError(Exception):
    """Base class for all package errors."""


class ConfigError(HolonomicError, ValueError):
    """Malformed or inconsistent run configuration."""


class ContractViolation(HolonomicError, ValueError):
    """A numerical precondition or postcondition does not hold."""


class SingularityError(ContractViolation):
    """A model coefficient diverges at the requested time."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class PathError(ContractViolation):
    """Invalid parameter-sphere path, or evaluation outside its domain."""


class UnitarityError(ContractViolation):
    """Propagation drifted away from unitarity or failed to converge."""
