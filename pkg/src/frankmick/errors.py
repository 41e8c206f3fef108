"""Exception types shared across the package."""


class FrankMickError(Exception):
    """Base class for all library errors."""


class NonInvertible(FrankMickError):
    """tau cannot be mapped to a finite Frank parameter."""


class ZeroTau(FrankMickError):
    """tau = 0 has no Frank parameter; use the uniform density instead."""


class NonPositiveDensity(FrankMickError):
    """A log-density stencil hit a nonpositive density value."""


class GridMismatch(FrankMickError):
    """Two checkerboard objects with different grid sizes were combined."""


class NotConverged(FrankMickError):
    """Sinkhorn scaling failed to reach the marginal tolerance."""


class DivergenceDetected(FrankMickError):
    """The fixed-point iteration underflowed or stopped contracting."""


class BracketFailure(FrankMickError):
    """The multiplier search could not bracket the target tau.

    Attributes
    ----------
    tau_range : tuple of float
        (lowest, highest) tau values achieved while searching.
    """

    def __init__(self, msg, tau_range=None):
        super().__init__(msg)
        self.tau_range = tau_range


class TauInfeasible(FrankMickError):
    """|target tau| is at or beyond the maximum attainable on the grid."""


class NoConvergence(FrankMickError):
    """Solver exhausted its iteration limits.

    Attributes
    ----------
    report : SolverReport
        Best iterate found before giving up.
    """

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report
