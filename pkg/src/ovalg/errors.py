"""Exception types shared across the package."""


class OvalgError(Exception):
    """Base class for all errors raised by ovalg."""


class ZeroInverse(OvalgError, ZeroDivisionError):
    pass


class DimensionMismatch(OvalgError, ValueError):
    pass


class ZeroPolynomial(OvalgError, ValueError):
    pass


class ParseError(OvalgError, ValueError):
    pass


class NonUnitConstantTerm(OvalgError, ValueError):
    pass


class UnderdeterminedNotCovered(OvalgError, ValueError):
    pass


class NotFoundWithin(OvalgError):
    """A searched-for degree was not reached before the bound."""

    def __init__(self, bound, what="value"):
        super().__init__(f"{what} not found within degree {bound}")
        self.bound = bound
        self.what = what


class BadParameters(OvalgError, ValueError):
    pass


class SingularTransform(OvalgError, ValueError):
    pass


class DegreeTooSmall(OvalgError, ValueError):
    pass


class NotOV(OvalgError, ValueError):
    pass


class NotMixed(OvalgError, ValueError):
    pass


class SingularSubset(OvalgError, ValueError):
    pass


class InsufficientHeadroom(OvalgError, ValueError):
    pass


class BudgetExceeded(OvalgError, MemoryError):
    """A matrix would exceed the configured entry budget."""


class IdentityViolation(OvalgError, AssertionError):
    """A computed identity that must hold did not."""
