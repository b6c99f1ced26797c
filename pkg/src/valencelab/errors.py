"""Exception hierarchy shared by every module."""


class ValenceError(Exception):
    """Base class for all library errors."""


class ZeroPolynomial(ValenceError):
    pass


class NoConvergence(ValenceError):
    pass


class DegenerateShape(ValenceError):
    pass


class EntrySwell(ValenceError):
    pass


class InvalidDegrees(ValenceError):
    pass


class InfiniteValence(ValenceError):
    pass


class ResidualFailure(ValenceError):
    pass


class NotCoprime(ValenceError):
    pass


class InvalidDegree(ValenceError):
    pass


class InvalidParameter(ValenceError):
    pass


class CommonFactor(ValenceError):
    """Numerator and denominator of a rational map share a root."""


class RiemannHurwitzMismatch(ValenceError):
    pass


class FatouViolation(ValenceError):
    pass


class ContourTooClose(ValenceError):
    pass


class NonIntegralWinding(ValenceError):
    pass


class SingularZeroPresent(ValenceError):
    pass


class IsolationFailure(ValenceError):
    pass


class ParseError(ValenceError):
    """Malformed literal or coefficient list; carries the offending token."""

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token
