"""Exception hierarchy shared by every module.

The CLI maps each class to its own exit status, so keep the classes distinct
even where they look alike.
"""


class PCFError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ValidationError(PCFError, ValueError):
    """Malformed graph input (bad endpoints, self-loops, duplicates)."""

    exit_code = 3


class SizeError(PCFError, ValueError):
    """Requested object would not fit the memory/index budget."""

    exit_code = 4


class ParameterError(PCFError, ValueError):
    """A numeric parameter is outside its allowed range."""

    exit_code = 3


class ContractError(PCFError, ValueError):
    """Arguments are individually valid but inconsistent with each other."""

    exit_code = 3


class CapacityError(PCFError):
    """Exact enumeration refused because the state space would be too large."""

    exit_code = 4


class DomainError(PCFError, ValueError):
    """A function was evaluated outside the region where it is defined."""

    exit_code = 3


class NumericError(PCFError, ArithmeticError):
    """Quadrature or root finding failed to reach the requested accuracy."""

    exit_code = 5


class BracketError(PCFError, ValueError):
    """A search bracket does not straddle the target."""

    exit_code = 6
