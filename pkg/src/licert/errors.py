"""Exception hierarchy. The CLI maps each class to an exit code."""


class LicertError(Exception):
    exit_code = 1


class ValidationError(LicertError, ValueError):
    """Malformed input: bad file, wrong lengths, non-finite values."""

    exit_code = 2


class DomainError(ValidationError):
    """Argument outside the mathematical domain of a function."""


class UnsupportedError(LicertError):
    """Requested representation or regime is not available."""

    exit_code = 3


class MomentConditionError(UnsupportedError):
    """The measure lacks the vanishing moments a Fourier formula needs."""


class ConvergenceError(LicertError, RuntimeError):
    exit_code = 4
