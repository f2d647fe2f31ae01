"""Exception types raised across the library."""


class AlabError(Exception):
    """Base class for every library-specific failure."""


class DimensionMismatch(AlabError):
    """Operator and vector (or two operators) do not share a dimension."""


class NonNormalizedInput(AlabError):
    """A state that must be normalized is not."""


class NonHermitianResult(AlabError):
    """An expectation value came out with a non-negligible imaginary part."""


class StepCountTooSmall(AlabError):
    """Integration at the requested resolution exceeded the norm-drift limit."""


class AlreadyAboveWindow(AlabError):
    """Success probability at the smallest probed run time already exceeds the window."""


class NotReached(AlabError):
    """The run-time search never landed the success probability inside the window."""


class DimensionTooLarge(AlabError):
    """Dense processing was requested beyond the configured qubit budget."""


class NoConvergence(AlabError):
    """The iterative eigenvalue solver did not converge."""


class ZeroSuccess(AlabError):
    """A diagnostic that conditions on success was run with success probability ~ 0."""


class NotCanonical(AlabError):
    """The cost function is not in canonical form (h(0)=0, h(z)>0 otherwise)."""


class DegenerateMinimum(AlabError):
    """An operation that requires a unique minimizer got a degenerate one."""


class GenerationExhausted(AlabError):
    """Instance generation hit the restart cap without producing a valid instance."""


class CoefficientBoundViolated(AlabError):
    """A problem-term coefficient exceeded the |c(t)| <= 1 contract."""


class BudgetExceeded(AlabError):
    """An exhaustive experiment was requested beyond its size budget."""


class GridExhausted(AlabError):
    """A grid search ran out of grid before meeting its target."""


class ConfigError(AlabError):
    """Invalid experiment configuration."""
