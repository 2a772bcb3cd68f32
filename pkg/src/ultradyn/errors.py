"""Exception hierarchy shared by every module."""


class UltradynError(Exception):
    """Base class for all toolkit errors."""


class ParseError(UltradynError, ValueError):
    def __init__(self, message, position=None, expected=()):
        self.position = position
        self.expected = tuple(expected)
        detail = message
        if position is not None:
            detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class PreconditionError(UltradynError, ValueError):
    """An operation's documented precondition does not hold."""


class DegreeError(PreconditionError):
    """Map degree is outside what the operation accepts."""


class ResourceError(UltradynError, RuntimeError):
    """A configured resource cap (degree, steps) was exceeded."""


class DegeneracyError(UltradynError, ArithmeticError):
    """Dynatomic or multiplier construction hit a degenerate case."""


class PrecisionError(UltradynError, ArithmeticError):
    """p-adic precision is insufficient for the requested certificate."""


class UnsupportedConfiguration(UltradynError, NotImplementedError):
    """The input is valid but outside what the exact machinery can reach."""


class NoCertificateError(UltradynError):
    """A certificate search finished without finding a witness."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}
