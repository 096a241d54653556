"""Exception hierarchy shared by all wavebands modules."""


class WavebandsError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WavebandsError):
    """A configuration file could not be parsed."""


class ValidationError(WavebandsError):
    """A named invariant of the input data is violated."""


class TubeSelfIntersecting(WavebandsError):
    """The requested thickness makes the transverse weight lose positivity."""


class SolverFailure(WavebandsError):
    """An eigenvalue solve did not produce acceptable results."""


class NotPositiveDefinite(SolverFailure):
    """The mass matrix of a pencil failed its positive-definite factorization."""


class NoConvergence(SolverFailure):
    """The iterative eigensolver ran out of iterations."""


class GapViolation(WavebandsError):
    """The certified cross-section spectral gap came out nonpositive."""


class PropertyViolation(WavebandsError):
    """A structural band property (symmetry, monotonicity) failed."""


class InconsistentBands(WavebandsError):
    """Endpoint-rule and extrema-rule gap computations disagree."""


class DimensionTooLarge(WavebandsError):
    """A dense diagnostic was requested for too many degrees of freedom."""


class FloorTooHigh(WavebandsError):
    """Discretization error would contaminate a thickness-convergence rate."""


class InsufficientData(WavebandsError):
    """Not enough data points for a requested fit."""
