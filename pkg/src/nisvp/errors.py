"""Exception hierarchy shared by every module."""


class NisvpError(Exception):
    """Base class for all errors raised by the package."""


class ShapeMismatch(NisvpError, ValueError):
    pass


class ZeroDenominator(NisvpError, ZeroDivisionError):
    pass


class BadRange(NisvpError, ValueError):
    pass


class NoConvergence(NisvpError, RuntimeError):
    pass


class LengthMismatch(NisvpError, ValueError):
    pass


class NegativeDiagonal(NisvpError, ValueError):
    pass


class InfeasibleInput(NisvpError, ValueError):
    pass


class BadMultiplicities(NisvpError, ValueError):
    pass


class IndexOutOfBounds(NisvpError, IndexError):
    pass


class NotSquare(ShapeMismatch):
    pass


class NoTrace(NisvpError, ValueError):
    pass
