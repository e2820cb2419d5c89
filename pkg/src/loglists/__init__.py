"""loglists: sequences with O(log n) range operations on a dynamic forest.

The package has three layers plus tooling:

* :mod:`loglists.forest` -- dynamic rooted trees with per-arc cost channels
  (link, cut, re-root, path queries/updates);
* :mod:`loglists.loglist` -- the list abstraction built on a path-shaped
  tree (splice, reverse, range min/max/add/negate, rank/select);
* :mod:`loglists.rearrange` -- permutation rearrangement operations and the
  O(n log n) sorter by prefix reversals and prefix transpositions;
* :mod:`loglists.oracle` -- naive reference implementations and the
  differential fuzz harness; :mod:`loglists.cli` -- the batch front end.
"""

from ._backend import BACKEND
from ._kernels import COST_LIMIT
from .errors import (
    BoundaryError,
    ChannelError,
    CostOverflowError,
    EmptyListError,
    ForeignHandleError,
    InvalidVertexError,
    LinkError,
    LogListsError,
    RangeOrderError,
    RootOperationError,
)
from .forest import Forest
from .loglist import VAL, LogList, build

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "COST_LIMIT",
    "Forest",
    "LogList",
    "VAL",
    "build",
    "LogListsError",
    "InvalidVertexError",
    "RootOperationError",
    "LinkError",
    "CostOverflowError",
    "ChannelError",
    "ForeignHandleError",
    "BoundaryError",
    "RangeOrderError",
    "EmptyListError",
]
