"""Shared exception types.

DomainError: the input is outside an operation's mathematical domain.
PrecisionError: the answer exists but cannot be certified at the working
precision; callers may retry with a larger precision cap.
"""


class DomainError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    pass
