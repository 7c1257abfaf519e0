"""Exception types shared across the package."""


class SiegelEisError(Exception):
    """Base class for all errors raised by this package."""


class NotRational(SiegelEisError, ValueError):
    pass


class Degenerate(SiegelEisError, ValueError):
    pass


class OddRank(SiegelEisError, ValueError):
    pass


class EvenRank(SiegelEisError, ValueError):
    pass


class EvenPrime(SiegelEisError, ValueError):
    pass


class PoleAtOne(SiegelEisError, ValueError):
    pass


class NonIntegralQuotient(SiegelEisError, ArithmeticError):
    pass


class InvalidParams(SiegelEisError, ValueError):
    pass


class MissingIndex(SiegelEisError, KeyError):
    pass


class NotAUnit(SiegelEisError, ValueError):
    pass


class NotOnePlusP(SiegelEisError, ValueError):
    pass


class PrecisionExhausted(SiegelEisError, ArithmeticError):
    pass


class ValidationFailed(SiegelEisError, AssertionError):
    pass


class PoleNotCancelled(SiegelEisError, ArithmeticError):
    pass


class EnumerationTooLarge(SiegelEisError, ValueError):
    """A brute-force enumeration would exceed the configured budget."""
