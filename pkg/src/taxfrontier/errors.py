"""Exception hierarchy shared by the solvers and the CLI."""


class TaxFrontierError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(TaxFrontierError, ValueError):
    pass


class DegeneratePolicyError(InvalidArgument):
    """Raised when regime thresholds are undefined (y1 = 0 or a zero retained share)."""


class NumericFailure(TaxFrontierError, ArithmeticError):
    """Base for failures of a numerical method (exit code 3 at the CLI)."""


class NumericDomainError(NumericFailure):
    pass


class QuadratureError(NumericFailure):
    pass


class NoBalanceError(NumericFailure):
    """No subsidy level balances the budget inside the search bracket."""
