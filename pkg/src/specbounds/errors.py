"""Exception hierarchy shared by every module."""


class SpecBoundsError(Exception):
    """Base class for all errors raised by specbounds."""


class DomainError(SpecBoundsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedExponentError(DomainError):
    pass


class PreconditionError(SpecBoundsError, ValueError):
    """The inputs are well formed but violate a theorem's hypotheses."""


class DataError(SpecBoundsError, ValueError):
    """Sampled input data is malformed (too short, unordered, wrong convexity)."""


class RangeError(SpecBoundsError):
    """An optimum was not attained inside the sampled range."""


class ConvergenceError(SpecBoundsError, RuntimeError):
    pass


class SpectrumError(SpecBoundsError, RuntimeError):
    """The requested eigenvalue could not be located (node count unreachable)."""


class InfeasibleError(SpecBoundsError):
    pass
