"""Exception hierarchy.

Two families matter to callers: :class:`UsageError` (bad input, exit code 2
on the command line) and :class:`ResourceError` (budget and size caps, exit
code 3).
"""


class StrengthLabError(Exception):
    pass


class UsageError(StrengthLabError, ValueError):
    pass


class ResourceError(StrengthLabError):
    pass


class ZeroInverse(UsageError, ZeroDivisionError):
    pass


class NotPrime(UsageError):
    pass


class InvalidDegree(UsageError):
    pass


class SizeCap(ResourceError):
    pass


class BudgetExceeded(ResourceError):
    pass


class DimensionMismatch(UsageError):
    pass


class ArityMismatch(UsageError):
    pass


class CharTooSmall(UsageError):
    pass


class CharTwo(UsageError):
    pass


class NotHomogeneous(UsageError):
    pass


class WrongDegree(UsageError):
    pass


class DegreeTooSmall(UsageError):
    pass


class MixedParameters(UsageError):
    pass


class IndexOutOfRange(UsageError):
    pass


class PolynomialSyntaxError(UsageError):
    """Malformed polynomial text; ``offset`` is the 0-based column of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
