"""Exception types shared across the package."""


class NumericalError(ArithmeticError):
    """Base class for every numerical failure raised by harmroot."""

    def __init__(self, message, expr=None):
        super().__init__(message)
        self.expr = expr


class DivisionByZeroJet(NumericalError, ZeroDivisionError):
    pass


class BranchPointError(NumericalError):
    pass


class NotLocallyUnivalent(NumericalError):
    pass


class DegenerateJacobian(NumericalError):
    pass


class DegenerateDenominator(NumericalError):
    pass


class NotAZero(NumericalError):
    pass


class IllConditionedFit(NumericalError):
    pass


class ParseError(ValueError):
    """Raised by the expression parser; carries the byte offset of the failure."""

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
