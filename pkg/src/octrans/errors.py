"""Exception and warning types shared across the toolkit."""


class NumericalError(RuntimeError):
    """A computation failed numerically (pole hit, series stalled, ...)."""


class PoleError(NumericalError):
    """Evaluation requested at (or too close to) a pole of the function."""


class ConvergenceError(NumericalError):
    """An iterative evaluation did not reach tolerance within its cap."""


class PositivityError(NumericalError):
    """A quantity that must be positive came out non-positive (quadrature failure)."""


class TruncationWarning(UserWarning):
    """Boundary mass of a truncated integral exceeds the safe threshold."""


class SamplingWarning(UserWarning):
    """Sampling grid too coarse for the requested frequency content."""
