"""Exception hierarchy shared across the package."""


class QRKError(Exception):
    """Base class for all package errors."""


class ValidationError(QRKError, ValueError):
    """An argument violates a documented precondition."""


class CapabilityError(QRKError):
    """The request exceeds what a backend or oracle supports."""


class ExecutionError(QRKError, RuntimeError):
    """A backend failed while executing a circuit."""


class ConfigurationError(QRKError, ValueError):
    """A run configuration is inconsistent or incomplete."""
