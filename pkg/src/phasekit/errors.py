"""Exception types shared across phasekit."""


class PhasekitError(Exception):
    """Base class; ``code`` is the machine-readable tag used by the CLI."""

    code = "error"


class InvalidConfig(PhasekitError, ValueError):
    code = "InvalidConfig"


class BasisMismatch(PhasekitError, ValueError):
    code = "BasisMismatch"


class NonPositiveSpectrum(PhasekitError, ArithmeticError):
    """Raised when an operator expected to be positive definite is not."""

    code = "NonPositiveSpectrum"
