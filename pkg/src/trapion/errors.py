"""Exception types shared across the package."""


class TrapionError(Exception):
    """Base class for all package errors."""


class DimensionOverflow(TrapionError):
    pass


class TruncationLeakage(TrapionError):
    """A sideband pulse would push population past the phonon cutoff."""


class ShapeMismatch(TrapionError):
    pass


class NonUnitaryMatrix(TrapionError):
    pass


class BadTargets(TrapionError):
    pass


class IndexOutOfRange(TrapionError):
    pass


class NotCoprime(TrapionError):
    pass


class RegisterTooSmall(TrapionError):
    pass


class PrecheckFailed(TrapionError):
    pass


class RetriesExhausted(TrapionError):
    pass


class NoInverse(TrapionError):
    pass


class FixedExponentNotCoprime(TrapionError):
    pass


class MessageOutOfRange(TrapionError):
    pass


class TooLargeForBruteForce(TrapionError):
    pass


class MissingParameters(TrapionError):
    pass


class InputFormatError(TrapionError, ValueError):
    """Malformed input document; the message names the offending field."""
