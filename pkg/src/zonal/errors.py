"""Exception hierarchy.

Numerical failures (tolerance, branch, singular integrand) derive from
:class:`NumericalError`; the CLI maps those to exit code 1 and everything
else raised on bad input to exit code 2.
"""


class ZonalError(Exception):
    pass


class NumericalError(ZonalError):
    pass


class NotDivisible(ZonalError, ArithmeticError):
    pass


class NotSymmetric(ZonalError, ValueError):
    pass


class DimensionMismatch(ZonalError, ValueError):
    pass


class ZeroCoordinate(ZonalError, ZeroDivisionError):
    pass


class ConstraintViolated(ZonalError, ValueError):
    pass


class CostGuard(ZonalError, ValueError):
    """Requested expansion is beyond the supported size."""


class InternalMismatch(ZonalError, AssertionError):
    pass


class NearSingularIntegrand(NumericalError):
    pass


class BranchCut(NumericalError):
    pass


class BranchAmbiguity(NumericalError):
    pass


class ToleranceNotMet(NumericalError):
    pass
