"""Exception types raised by the toolkit.

All of them subclass :class:`ValueError` so callers that only care about
"bad input" can catch that.
"""


class ResolutionError(ValueError):
    """The sampling grid is too coarse for the requested transform."""


class DivergentMomentError(ValueError):
    """A momentum moment was requested that is infinite for the input."""


class AliasingError(ValueError):
    """A propagated wave reached the edge of its periodic domain."""
