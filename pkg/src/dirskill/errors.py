"""Exception hierarchy.

Every error raised for bad input derives from :class:`DirskillError`, which
is itself a ``ValueError`` so callers that only care about "bad input" can
catch the builtin.
"""


class DirskillError(ValueError):
    """Base class for all input/validation errors raised by the package."""


class AllZeroError(DirskillError):
    """A contingency table has no observations (a = b = c = d = 0)."""


class NegativeCountError(DirskillError):
    """A cell count is negative or not an integer."""


class NonFiniteError(DirskillError):
    """A NaN or infinite value reached a computation that needs finite input."""


class TooShortError(DirskillError):
    """A series is too short for the requested statistic."""


class TiePolicyError(DirskillError):
    """A zero change was met while the tie policy is ``error``."""


class DegenerateBaselineError(DirskillError):
    """Perfect and reference scores coincide, so skill is undefined."""


class ZeroDenominatorError(DirskillError):
    """A ratio statistic has an all-zero denominator."""


class OutOfRangeError(DirskillError):
    """A value lies outside its admissible interval."""


class ParseError(DirskillError):
    """Malformed input file or row."""


class AlignmentError(DirskillError):
    """Actual and forecast values cannot be paired period by period."""
