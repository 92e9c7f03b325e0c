"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes: DomainError -> 1,
ResourceError -> 2, verification failure -> 3.
"""


class DkratioError(Exception):
    """Base class for all package errors."""


class DomainError(DkratioError, ValueError):
    """An argument violates a mathematical precondition (e.g. gcd(a, q) != 1)."""


class ResourceError(DkratioError, RuntimeError):
    """A request exceeds a configured memory or size budget."""


class OverflowRangeError(DkratioError, ArithmeticError):
    """An exact integer result left the supported 128-bit range.

    Raised instead of wrapping or silently rounding.
    """


class InsufficientDataError(DkratioError, ValueError):
    """A fit or summary was requested with too few usable data points."""


class NumericalError(DkratioError, ArithmeticError):
    """A floating-point consistency check failed (e.g. imaginary residue)."""
