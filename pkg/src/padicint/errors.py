"""Exception types shared across the package."""


class PadicIntError(Exception):
    """Base class for all package-specific errors."""


class BudgetExceeded(PadicIntError):
    """An enumeration would visit more points than the configured budget."""


class DivergentSum(PadicIntError):
    """A requested infinite sum does not converge."""


class EmptySet(PadicIntError):
    """A minimum was requested over an empty set."""


class DomainError(PadicIntError):
    """An argument lies outside the domain of a piecewise-defined function."""


class InfiniteMeasure(PadicIntError):
    """The measure of the requested set is not finite."""


class NotFiberReducible(PadicIntError):
    """The symbolic integrator cannot reduce the integrand on this domain."""


class UndefinedAtPoint(PadicIntError):
    """A valuation of zero appeared inside a term with nonzero coefficient."""


class ParseError(PadicIntError):
    """Syntax error in a polynomial or integrand expression."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column
