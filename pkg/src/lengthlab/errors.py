"""Exception types raised by lengthlab operations."""


class LengthLabError(Exception):
    """Base class for all lengthlab errors."""


class UnknownPointError(LengthLabError):
    """A point id does not exist in the space."""


class InvalidPathError(LengthLabError):
    """A path violates a structural invariant (ordering, ids, finiteness)."""


class InfiniteDistanceError(LengthLabError):
    """An operation requires a finite distance but got infinity."""


class MidpointNotFoundError(LengthLabError):
    """No approximate midpoint exists at the requested slack.

    Carries the failing sub-pair so callers can report which segment of a
    bisection could not be split.
    """

    def __init__(self, pair, level, slack, best):
        self.pair = pair
        self.level = level
        self.slack = slack
        self.best = best
        super().__init__(
            f"no approximate midpoint for pair {pair} at level {level}: "
            f"best max-distance {best:.6g} exceeds target with slack {slack:.6g}"
        )


class BisectionBoundError(LengthLabError):
    """A constructed dyadic path violated its per-level step bound."""


class NotLipschitzError(LengthLabError):
    """A field claimed to be 1-Lipschitz is not; carries a witness pair."""

    def __init__(self, message, pair=None, member=None):
        self.pair = pair
        self.member = member
        super().__init__(message)


class EmptySampleError(LengthLabError):
    """Grid sampling produced no nodes (spacing too large for the domain)."""


class InputFormatError(LengthLabError):
    """A JSON document does not match any of the accepted schemas."""
