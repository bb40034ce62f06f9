"""Exception types shared across the library.

Certification failures (a quantity that could not be separated from a
decision boundary at the maximum precision) are distinct from plain usage
errors so that callers, and the command line front end, can map them to
different exit codes.
"""


class BetadynError(Exception):
    """Base class for all library errors."""


class UncertifiedFloor(BetadynError):
    """A floor could not be certified: the enclosure of beta*x still meets
    an integer at the maximum precision."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class PrecisionExhausted(BetadynError):
    """A certified comparison remained undecided at the maximum precision."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class UndecidedFiniteness(BetadynError):
    """Whether the expansion of 1 terminates could not be decided, so digits
    of the periodized sequence past the safe depth are unavailable."""

    def __init__(self, message: str, depth: int | None = None):
        super().__init__(message)
        self.depth = depth


class InadmissibleWord(BetadynError):
    """A digit word that no point of [0,1] realizes was passed where an
    admissible word is required."""


class BudgetExceeded(BetadynError):
    """Projected enumeration size exceeds the configured cap."""

    def __init__(self, message: str, projected: int | None = None):
        super().__init__(message)
        self.projected = projected


class HypothesisViolated(BetadynError):
    """An empirical hypothesis check failed (covering fraction too small, or
    the selected mass fell below the guaranteed bound)."""


class PreconditionUnverifiable(BetadynError):
    """A symbolic precondition does not hold, or cannot be checked, for the
    supplied function family."""


class DegenerateRange(BetadynError):
    """Too few levels to fit a regression."""
