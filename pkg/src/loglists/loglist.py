"""Lists with O(log n) splicing, reversal, range updates and order statistics.

A :class:`LogList` stores a sequence of integer values (plus optional named
weight channels) on the arcs of a path-shaped tree inside a shared
:class:`~loglists.forest.Forest`. Every classical list operation and every
range operation below costs amortized O(log n); ``first``/``last`` are O(1)
and ``iterate`` is O(n) total:

  first/last, get_value, succ/prec, insert, delete, reverse,
  range_extreme (min/max), range_add, range_negate,
  find_rank, find_element, search_sorted, iterate.

Elements are addressed by opaque integer handles that stay valid across
every structural operation, including handles of a deleted sublist (they
address the returned sublist) and of inserted sublists (they address the
combined list afterwards).

Channel numbering in the public API: channel 0 is the value channel,
channels 1..W are the weight channels. The rank bookkeeping channel is
library-managed and not addressable.

Lists created on the same forest may exchange sublists via insert/delete;
lists on different forests cannot. Like the forest itself, a list must be
used from one thread at a time.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from ._kernels import NULL
from .errors import (
    BoundaryError,
    ChannelError,
    EmptyListError,
    ForeignHandleError,
    RangeOrderError,
)
from .forest import Forest, _check_cost

VAL = 0  # public number of the value channel
_IDX = 1  # internal rank channel, never exposed


def _vertex_layout(base: int, n: int):
    verts = base + 2 * np.arange(n + 1, dtype=np.int64)
    arcs = base + 2 * np.arange(n, dtype=np.int64) + 1
    return verts, arcs


def build(values, weight_channels: int = 0, forest: Forest | None = None,
          weights=None) -> "LogList":
    """Build a list in O(n); weights, when given, preset the weight channels.

    `weights` is a sequence of per-channel sequences, each of length
    len(values); it implies `weight_channels` when that is 0.
    """
    vals = [_check_cost(v) for v in values]
    n = len(vals)
    if weights is not None:
        weights = [list(col) for col in weights]
        if weight_channels == 0:
            weight_channels = len(weights)
        if len(weights) != weight_channels:
            raise ChannelError("weights do not match weight_channels")
        for col in weights:
            if len(col) != n:
                raise ChannelError("weight column length != len(values)")
            for v in col:
                _check_cost(v)
    nch = 2 + int(weight_channels)
    if forest is None:
        forest = Forest(channels=nch, capacity=2 * n + 8)
    elif forest.channels != nch:
        raise ChannelError(
            f"forest carries {forest.channels} channels, list needs {nch}"
        )
    lst = LogList(forest)
    if n == 0:
        return lst
    forest.reserve(2 * n + 1)
    base = forest._n_nodes
    forest._n_nodes += 2 * n + 1
    verts, arcs = _vertex_layout(base, n)
    forest.alive[base:base + 2 * n + 1] = 1
    forest.isarc[arcs] = 1
    forest.nsub[arcs] = 1
    forest.ea[arcs] = verts[:-1]
    forest.eb[arcs] = verts[1:]
    forest.cost[arcs, 0] = vals
    forest.cost[arcs, _IDX] = np.arange(1, n + 1)
    if weights is not None:
        for k, col in enumerate(weights):
            forest.cost[arcs, 2 + k] = col
    forest.mn[arcs] = forest.cost[arcs]
    forest.mx[arcs] = forest.cost[arcs]
    # in-order sequence runs from the root end: tail+, e_n, t_n, ..., e_1, t_1
    order = np.empty(2 * n + 1, np.int32)
    order[0] = verts[n]
    order[1::2] = arcs[::-1]
    order[2::2] = verts[:-1][::-1]
    K.k_build_chain(forest.st, order)
    lst._head = int(verts[0])
    lst._tailplus = int(verts[n])
    lst._n = n
    lst._first = int(arcs[0])
    lst._last = int(arcs[n - 1])
    return lst


class LogList:
    """A sequence with logarithmic classical, range and rank operations."""

    def __init__(self, forest: Forest):
        if forest.channels < 2:
            raise ChannelError("a list forest needs >= 2 channels")
        self.forest = forest
        self._head = NULL
        self._tailplus = NULL
        self._n = 0
        self._first: int | None = None
        self._last: int | None = None

    # -- plumbing ----------------------------------------------------------

    @property
    def weight_channels(self) -> int:
        return self.forest.channels - 2

    def _chan(self, channel) -> int:
        ch = int(channel)
        if ch == VAL:
            return 0
        if 1 <= ch <= self.weight_channels:
            return ch + 1
        raise ChannelError(
            f"channel {ch} unknown (0 = value, 1..{self.weight_channels} = weights)"
        )

    def _validate(self, x) -> tuple[int, int]:
        """Resolve a handle to (arc node, rank), checking membership."""
        f = self.forest
        try:
            a = int(x)
        except (TypeError, ValueError):
            raise ForeignHandleError(f"{x!r} is not an element handle") from None
        if a < 0 or a >= f._n_nodes or not f.isarc[a] or not f.alive[a]:
            raise ForeignHandleError(f"{x!r} is not an element handle")
        root, idx = K.k_rank_root(f.st, a, _IDX)
        if int(root) != self._tailplus:
            raise ForeignHandleError("handle belongs to a different list")
        return a, int(idx)

    def _ordered(self, x, y) -> tuple[int, int, int, int]:
        ax, rx = self._validate(x)
        ay, ry = self._validate(y)
        if rx > ry:
            raise RangeOrderError(f"range endpoints out of order ({rx} > {ry})")
        return ax, rx, ay, ry

    def _pool_vertex(self, v: int):
        self.forest.spare_vertices.append(v)

    def _take_vertex(self) -> int:
        pool = self.forest.spare_vertices
        if pool:
            return pool.pop()
        return self.forest.make_vertex()

    def _consume(self):
        self._head = NULL
        self._tailplus = NULL
        self._n = 0
        self._first = None
        self._last = None

    # -- endpoints and point queries ----------------------------------------

    def __len__(self) -> int:
        return self._n

    def first(self) -> int | None:
        """Handle of the first element (O(1)); None when empty."""
        return self._first

    def last(self) -> int | None:
        """Handle of the last element (O(1)); None when empty."""
        return self._last

    def endpoint(self, side: str) -> int | None:
        if side == "first":
            return self._first
        if side == "last":
            return self._last
        raise ValueError(f"side must be 'first' or 'last', got {side!r}")

    def get_value(self, x, channel=VAL) -> int:
        ch = self._chan(channel)
        f = self.forest
        a, _ = self._validate(x)
        return int(K.k_get_cost(f.st, a, ch))

    def succ(self, x) -> int:
        """Handle of the element right after x; error at the last element."""
        a, _ = self._validate(x)
        s = int(K.k_adjacent_arc(self.forest.st, self._head, a, True))
        if s == NULL:
            raise BoundaryError("succ of the last element")
        return s

    def prec(self, x) -> int:
        """Handle of the element right before x; error at the first element."""
        a, _ = self._validate(x)
        s = int(K.k_adjacent_arc(self.forest.st, self._head, a, False))
        if s == NULL:
            raise BoundaryError("prec of the first element")
        return s

    def neighbor(self, x, direction: str) -> int:
        if direction == "succ":
            return self.succ(x)
        if direction == "prec":
            return self.prec(x)
        raise ValueError(f"direction must be 'succ' or 'prec', got {direction!r}")

    # -- structural operations ----------------------------------------------

    def insert(self, other: "LogList", x, side: str = "after") -> "LogList":
        """Splice the whole of `other` into this list next to element x.

        `other` is consumed (it ends up empty); its element handles stay
        valid and address the combined list. Returns self.
        """
        if side not in ("after", "before"):
            raise ValueError(f"side must be 'after' or 'before', got {side!r}")
        if other is self:
            raise ForeignHandleError("cannot insert a list into itself")
        if not isinstance(other, LogList) or other.forest is not self.forest:
            raise ForeignHandleError("lists live on different forests")
        if self._n == 0:
            raise EmptyListError("insert target list is empty")
        ax, rx = self._validate(x)
        n1 = other._n
        if n1 == 0:
            return self
        f = self.forest
        if side == "before":
            if rx == 1:
                K.k_splice_prefix(
                    f.st, self._tailplus, self._head, other._tailplus,
                    other._last, _IDX, n1,
                )
                self._pool_vertex(other._tailplus)
                self._head = other._head
                self._first = other._first
                self._n += n1
                other._consume()
                return self
            ax = int(K.k_adjacent_arc(f.st, self._head, ax, False))
            rx -= 1
        K.k_splice_in(
            f.st, self._tailplus, ax, other._tailplus, other._head,
            other._last, _IDX, rx, n1,
        )
        self._pool_vertex(other._tailplus)
        if rx == self._n:
            self._last = other._last
        self._n += n1
        other._consume()
        return self

    def delete(self, x, y) -> "LogList":
        """Extract the sublist x..y; returns it as a standalone list.

        Handles of the extracted elements remain valid and address the
        returned list.
        """
        ax, rx, ay, ry = self._ordered(x, y)
        f = self.forest
        m = ry - rx + 1
        prev_arc = NULL
        if rx > 1:
            prev_arc = int(K.k_adjacent_arc(f.st, self._head, ax, False))
        succ_arc = NULL
        if rx == 1 and ry < self._n:
            succ_arc = int(K.k_adjacent_arc(f.st, self._head, ay, True))
        s = self._take_vertex()
        z, h1 = K.k_splice_out(
            f.st, self._tailplus, ax, ay, prev_arc, s, _IDX, rx - 1, m,
        )
        z, h1 = int(z), int(h1)
        out = LogList(f)
        out._head = h1
        out._tailplus = s
        out._n = m
        out._first = ax
        out._last = ay
        self._n -= m
        if self._n == 0:
            self._pool_vertex(self._tailplus)
            self._consume()
        else:
            if rx == 1:
                self._head = z
                self._first = succ_arc
            if ry - m == self._n:  # y was the last element
                self._last = prev_arc
        return out

    def reverse(self, x, y) -> "LogList":
        """Reverse the order of the sublist x..y in place. Returns self."""
        ax, rx, ay, ry = self._ordered(x, y)
        if ax == ay:
            return self
        K.k_reverse_seg(self.forest.st, self._tailplus, ax, ay, _IDX, rx - 1, ry)
        if rx == 1:
            self._first = ay
        if ry == self._n:
            self._last = ax
        return self

    # -- range operations -----------------------------------------------------

    def range_extreme(self, x, y, mode: str = "min", channel=VAL) -> int:
        """Handle of a min/max-valued element in x..y.

        Among equal extremes, returns the occurrence at the largest
        position in the range.
        """
        if mode not in ("min", "max"):
            raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
        ch = self._chan(channel)
        ax, _, ay, _ = self._ordered(x, y)
        a = K.k_seg_extreme(
            self.forest.st, self._tailplus, ax, ay, ch, mode == "max"
        )
        return int(a)

    def range_min(self, x, y, channel=VAL) -> int:
        return self.range_extreme(x, y, "min", channel)

    def range_max(self, x, y, channel=VAL) -> int:
        return self.range_extreme(x, y, "max", channel)

    def range_add(self, x, y, a, channel=VAL) -> "LogList":
        """Add a to every element value (or weight) in x..y."""
        ch = self._chan(channel)
        a = _check_cost(a)
        ax, _, ay, _ = self._ordered(x, y)
        bad = int(K.k_seg_add(self.forest.st, self._tailplus, ax, ay, ch, a))
        if bad:
            from .errors import CostOverflowError

            raise CostOverflowError("range_add would overflow an element")
        return self

    def range_negate(self, x, y, channel=VAL) -> "LogList":
        """Negate every element value (or weight) in x..y."""
        ch = self._chan(channel)
        ax, _, ay, _ = self._ordered(x, y)
        K.k_seg_negate(self.forest.st, self._tailplus, ax, ay, ch)
        return self

    # -- rank / select / sorted search ---------------------------------------

    def find_rank(self, x) -> int:
        """1-based position of element x."""
        _, r = self._validate(x)
        return r

    def find_element(self, i) -> int:
        """Handle of the i-th element (1-based)."""
        i = int(i)
        if i < 1 or i > self._n:
            raise RangeOrderError(f"position {i} outside 1..{self._n}")
        a = K.k_list_search(
            self.forest.st, self._tailplus, self._head, _IDX, i
        )
        return int(a)

    def search_sorted(self, b, channel=VAL) -> int | None:
        """Element of value b, else the largest value below b, else None.

        Assumes the channel's values strictly increase along the list
        (caller contract; violations give an unspecified element).
        """
        ch = self._chan(channel)
        b = _check_cost(b)
        if self._n == 0:
            return None
        a = int(K.k_list_search(
            self.forest.st, self._tailplus, self._head, ch, b
        ))
        return None if a == NULL else a

    # -- bulk access ----------------------------------------------------------

    def _snapshot(self) -> np.ndarray:
        """All channel rows in list order, (n, channels); O(n)."""
        f = self.forest
        out = np.empty((self._n, f.channels), np.int64)
        if self._n:
            K.k_snapshot(f.st, self._tailplus, self._head, out)
        return out

    def iterate(self, channel=VAL) -> list[int]:
        """Values of one channel in list order; O(n) total."""
        if self._n == 0:
            return []
        ch = self._chan(channel)
        return [int(v) for v in self._snapshot()[:, ch]]

    def to_list(self, channel=VAL) -> list[int]:
        return self.iterate(channel)

    def __iter__(self):
        return iter(self.iterate())

    def element_handles(self) -> list[int]:
        """Handles of all elements in list order; O(n) total."""
        f = self.forest
        out = np.empty(self._n, np.int32)
        if self._n:
            K.k_snapshot_ids(f.st, self._tailplus, self._head, out)
        return [int(a) for a in out]

    def _audit_indices(self) -> bool:
        """True iff the managed rank channel reads exactly 1..n."""
        if self._n == 0:
            return True
        idx = self._snapshot()[:, _IDX]
        return bool(np.array_equal(idx, np.arange(1, self._n + 1)))
