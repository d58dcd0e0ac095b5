"""Exception hierarchy shared by every module."""


class SadicError(Exception):
    """Base class for all errors raised by this package."""


class AlphabetError(SadicError, ValueError):
    pass


class ParseError(SadicError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GuardExceeded(SadicError):
    """A configured size guard (semigroup, DFA states, morphism space...) was hit."""


class BudgetExceeded(SadicError):
    """A prefix/iteration budget ran out before the question was resolved."""


class DivergentWordError(SadicError):
    """A letter was requested from the divergent word (bottom)."""


class BoundaryError(SadicError):
    """Interval arithmetic could not separate a value from an integer boundary."""


class DigitRuleError(SadicError, ValueError):
    pass


class NotCongenialError(SadicError, ValueError):
    pass
