"""Exception hierarchy.

Every domain failure derives from :class:`PqlabError`, which the CLI maps to
exit code 1.
"""


class PqlabError(ValueError):
    pass


class DomainError(PqlabError):
    """An argument lies outside the domain of the operation."""


class NotInvertible(PqlabError):
    pass


class NotPeriodic(PqlabError):
    pass


class NoLogarithm(PqlabError):
    pass


class KeyGenError(PqlabError):
    pass


class EncodingError(PqlabError):
    pass


class DecodingError(PqlabError):
    pass


class BlockTooLarge(PqlabError):
    pass


class GaveUp(PqlabError):
    """Shor's outer loop ran out of rounds; ``trace`` holds every attempt."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class Singular(PqlabError):
    pass


class Unsupported(PqlabError):
    pass


class ParameterMismatch(PqlabError):
    pass


class SigningFailed(PqlabError):
    pass


class RegistryError(PqlabError):
    pass


class ProtocolError(PqlabError):
    pass


class AuthFailure(PqlabError):
    pass


class ReplayError(PqlabError):
    pass


class KeyFileError(PqlabError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
