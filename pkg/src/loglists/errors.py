"""Exception taxonomy shared by the forest and list layers."""


class LogListsError(Exception):
    """Base class for every error raised by this package."""


class InvalidVertexError(LogListsError):
    """An identifier does not name a live vertex of this forest."""


class RootOperationError(LogListsError):
    """The operation needs a non-root vertex (or the reverse)."""


class LinkError(LogListsError):
    """dlink precondition violated: not a root, or both ends in one tree."""


class CostOverflowError(LogListsError):
    """A cost value or range update would leave the guarded 64-bit range."""


class ChannelError(LogListsError):
    """Unknown cost channel, or a channel the caller may not modify."""


class ForeignHandleError(LogListsError):
    """An element handle that does not belong to this list."""


class BoundaryError(LogListsError):
    """succ of the last element / prec of the first element."""


class RangeOrderError(LogListsError):
    """A sublist was given with its endpoints out of order."""


class EmptyListError(LogListsError):
    """The operation is undefined on an empty list."""
