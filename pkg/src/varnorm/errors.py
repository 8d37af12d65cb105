"""Exception types shared across the package.

The CLI maps ``ValidationError`` to exit code 2 and ``NumericError`` /
``EvalDomainError`` to exit code 3.
"""


class VarnormError(Exception):
    pass


class ValidationError(VarnormError, ValueError):
    """A precondition on the inputs was violated."""


class ParseError(ValidationError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class NumericError(VarnormError, ArithmeticError):
    """A computation could not produce a trustworthy number."""


class EvalDomainError(NumericError):
    def __init__(self, message: str, x=None):
        if x is not None:
            message = f"{message} at x={x!r}"
        super().__init__(message)
        self.x = x
