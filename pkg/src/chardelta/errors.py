"""Exception hierarchy shared by all modules."""


class ChardeltaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ChardeltaError, ValueError):
    """Input lies outside the mathematical domain (pole, trivial character, ...)."""


class PreconditionError(ChardeltaError, ValueError):
    """A documented precondition of an operation is violated."""


class NumericError(ChardeltaError, ArithmeticError):
    """A numerical engine failed to converge or exhausted its budget."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class FormatError(ChardeltaError, ValueError):
    """An input file is structurally invalid."""


class ParseError(FormatError):
    """A line of an input file could not be parsed."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class InvariantError(ChardeltaError, ValueError):
    """Data violates a structural invariant (e.g. lambda(1) != 1)."""


class InfeasibleError(ChardeltaError, ValueError):
    """A constraint system has no feasible point."""


class NoStationaryPoint(ChardeltaError):
    """The phase has no critical point on the support; the integral is in the decay regime."""
