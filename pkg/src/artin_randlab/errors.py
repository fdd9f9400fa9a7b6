"""Exception types raised across the package."""


class ArtinError(ValueError):
    """Base class for all errors raised by artin_randlab."""


class DuplicateEdge(ArtinError):
    pass


class BadVertex(ArtinError):
    pass


class BadLabel(ArtinError):
    pass


class TooSmall(ArtinError):
    """The graph (or rank) is below the minimum size an operation needs."""


class BadForbidCount(ArtinError):
    pass


class BadPredicate(ArtinError):
    pass


class BadSamples(ArtinError):
    pass


class BadGrowth(ArtinError):
    pass


class TooLarge(ArtinError):
    """An enumeration would exceed its graph budget."""


class CliqueBudgetExceeded(ArtinError):
    """Maximal-clique enumeration hit its cap; the answer was not computed."""


class ParseError(ArtinError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
