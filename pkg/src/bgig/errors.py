"""Exception hierarchy shared by every module.

Each class also derives from the closest builtin so callers that only know
about ``ValueError`` or ``ArithmeticError`` still catch them.
"""


class BgigError(Exception):
    """Base class for all library errors."""


class DomainError(BgigError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(BgigError, ValueError):
    """A documented precondition on the inputs does not hold."""


class BesselOverflowError(BgigError, OverflowError):
    """A special-function value exceeds the floating-point range."""


class ConvergenceError(BgigError, ArithmeticError):
    """A quadrature, root finder or iteration failed to reach tolerance."""


class SamplingError(BgigError, RuntimeError):
    """A rejection sampler hit its iteration cap."""


class TabulationError(BgigError, ArithmeticError):
    """A tabulated CDF is not monotone within tolerance."""


class NoRootError(BgigError, ArithmeticError):
    """No sign change was found on the admissible interval."""


class BracketError(BgigError, ArithmeticError):
    """A search bracket does not contain an interior optimum."""


class OptimizationError(BgigError, ArithmeticError):
    """A fit finished with a residual above the accepted ceiling."""


class DegenerateSampleError(BgigError, ValueError):
    """A data sample cannot support the requested estimator."""
