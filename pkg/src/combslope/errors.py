"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PlanError(ValueError):
    """A sequence plan cannot be constructed from the given parameters."""


class BuildError(RuntimeError):
    """A comb domain cannot be built from the given plan."""


class GridError(ValueError):
    """A grid problem is ill-posed (unlabeled boundary, bad evaluation point)."""


class ConvergenceError(RuntimeError):
    """The iterative Laplace solver did not reach the requested residual."""


class EstimationError(RuntimeError):
    """A Monte Carlo estimate could not be produced."""


class CalibrationError(RuntimeError):
    """Width calibration exhausted its search budget."""
