"""Dynamic forest of rooted trees with multi-channel arc costs.

A :class:`Forest` maintains vertex-disjoint rooted trees under ``dlink`` /
``dcut`` / ``devert`` while answering path queries and applying path
updates, each in amortized O(log n):

* ``dparent``, ``droot`` -- structure queries;
* ``dcost``, ``dmincost``, ``dsearchcost`` -- cost queries on the path from
  a vertex to its root;
* ``dupdate``, ``dminuscost`` -- add a constant to, or negate, every arc
  cost on that path.

Several independent cost channels may be carried per arc; the channel
count is fixed when the forest is created. Values are exact signed
integers, checked against ``COST_LIMIT`` (2**61) so that updates can never
silently wrap.

Internally the forest is an arena of numpy arrays holding both vertices
and arc nodes of the subdivided trees; the kernels in ``_kernels`` do the
self-adjusting work. A forest must be used from one thread at a time: even
queries restructure the internal trees.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from ._kernels import COST_LIMIT, NULL
from .errors import (
    ChannelError,
    CostOverflowError,
    InvalidVertexError,
    LinkError,
    RootOperationError,
)

MIN_MODE = "min"
MAX_MODE = "max"


def _check_cost(value):
    v = int(value)
    if v < -COST_LIMIT or v > COST_LIMIT:
        raise CostOverflowError(f"cost {v} outside guarded range +-2**61")
    return v


class Forest:
    """A forest of dynamic rooted trees with per-arc cost channels."""

    def __init__(self, channels: int = 1, capacity: int = 16):
        if channels < 1:
            raise ChannelError("a forest needs at least one cost channel")
        self.channels = int(channels)
        self._cap = max(int(capacity), 8)
        self._n_nodes = 0
        self._free_arcs: list[int] = []
        self.spare_vertices: list[int] = []  # recycled singleton vertices
        c = self._cap
        ch = self.channels
        self.left = np.full(c, NULL, np.int32)
        self.right = np.full(c, NULL, np.int32)
        self.par = np.full(c, NULL, np.int32)
        self.flip = np.zeros(c, np.uint8)
        self.isarc = np.zeros(c, np.uint8)
        self.nsub = np.zeros(c, np.int32)
        self.ea = np.full(c, NULL, np.int32)
        self.eb = np.full(c, NULL, np.int32)
        self.cost = np.zeros((c, ch), np.int64)
        self.mn = np.zeros((c, ch), np.int64)
        self.mx = np.zeros((c, ch), np.int64)
        self.add = np.zeros((c, ch), np.int64)
        self.neg = np.zeros((c, ch), np.uint8)
        self.alive = np.zeros(c, np.uint8)
        self._stack = np.empty(c, np.int32)
        self._rebuild_state()

    def _rebuild_state(self):
        self.st = (
            self.left,
            self.right,
            self.par,
            self.flip,
            self.isarc,
            self.nsub,
            self.ea,
            self.eb,
            self.cost,
            self.mn,
            self.mx,
            self.add,
            self.neg,
            self._stack,
        )

    def _grow(self, need: int):
        cap = self._cap
        while cap < need:
            cap *= 2
        pad = cap - self._cap

        def ext1(a, fill):
            return np.concatenate([a, np.full(pad, fill, a.dtype)])

        def ext2(a):
            return np.concatenate(
                [a, np.zeros((pad, a.shape[1]), a.dtype)], axis=0
            )

        self.left = ext1(self.left, NULL)
        self.right = ext1(self.right, NULL)
        self.par = ext1(self.par, NULL)
        self.flip = ext1(self.flip, 0)
        self.isarc = ext1(self.isarc, 0)
        self.nsub = ext1(self.nsub, 0)
        self.ea = ext1(self.ea, NULL)
        self.eb = ext1(self.eb, NULL)
        self.cost = ext2(self.cost)
        self.mn = ext2(self.mn)
        self.mx = ext2(self.mx)
        self.add = ext2(self.add)
        self.neg = ext2(self.neg)
        self.alive = ext1(self.alive, 0)
        self._stack = np.empty(cap, np.int32)
        self._cap = cap
        self._rebuild_state()

    def reserve(self, extra: int):
        """Preallocate room for `extra` more nodes (vertices plus arcs)."""
        if self._n_nodes + extra > self._cap:
            self._grow(self._n_nodes + extra)

    def _alloc_raw(self) -> int:
        if self._n_nodes >= self._cap:
            self._grow(self._n_nodes + 1)
        x = self._n_nodes
        self._n_nodes += 1
        self.alive[x] = 1
        return x

    def make_vertex(self) -> int:
        """Create a fresh vertex that is the root of its own new tree."""
        return self._alloc_raw()

    def _alloc_arc(self, costs) -> int:
        if self._free_arcs:
            a = self._free_arcs.pop()
            self.alive[a] = 1
        else:
            a = self._alloc_raw()
        self.isarc[a] = 1
        self.left[a] = NULL
        self.right[a] = NULL
        self.par[a] = NULL
        self.flip[a] = 0
        self.nsub[a] = 1
        for ch in range(self.channels):
            v = costs[ch]
            self.cost[a, ch] = v
            self.mn[a, ch] = v
            self.mx[a, ch] = v
            self.add[a, ch] = 0
            self.neg[a, ch] = 0
        return a

    def _free_arc(self, a: int):
        self.alive[a] = 0
        self.isarc[a] = 0
        self.nsub[a] = 0
        self.ea[a] = NULL
        self.eb[a] = NULL
        self._free_arcs.append(a)

    def _check_vertex(self, v) -> int:
        v = int(v)
        if v < 0 or v >= self._n_nodes or not self.alive[v] or self.isarc[v]:
            raise InvalidVertexError(f"{v} is not a live vertex")
        return v

    def _check_channel(self, ch) -> int:
        ch = int(ch)
        if ch < 0 or ch >= self.channels:
            raise ChannelError(f"channel {ch} out of range 0..{self.channels - 1}")
        return ch

    # -- queries ---------------------------------------------------------

    def dparent(self, v) -> int | None:
        """Parent vertex of v, or None if v is the root of its tree."""
        v = self._check_vertex(v)
        w = int(K.k_parent_vertex(self.st, v))
        return None if w == NULL else w

    def droot(self, v) -> int:
        """Root of the tree containing v."""
        v = self._check_vertex(v)
        return int(K.k_repr_root(self.st, v))

    def dcost(self, v, ch=0) -> int:
        """Cost of the arc (v, dparent(v)) on channel ch."""
        v = self._check_vertex(v)
        ch = self._check_channel(ch)
        a = int(K.k_above_arc(self.st, v))
        if a == NULL:
            raise RootOperationError("dcost of a root vertex")
        return int(self.cost[a, ch])

    def dmincost(self, v, ch=0, mode: str = MIN_MODE) -> int:
        """Vertex closest to the root whose arc cost is extreme on v..root."""
        v = self._check_vertex(v)
        ch = self._check_channel(ch)
        if mode not in (MIN_MODE, MAX_MODE):
            raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
        w = int(K.k_extreme_path(self.st, v, ch, mode == MAX_MODE))
        if w == NULL:
            raise RootOperationError("dmincost of a root vertex")
        return w

    def dsearchcost(self, v, ch, a) -> int:
        """Search the path v..root for the arc of cost a.

        Assumes costs strictly increase from v toward the root (caller
        contract). Returns the matching vertex, else the vertex carrying
        the largest cost below a, else the root.
        """
        v = self._check_vertex(v)
        ch = self._check_channel(ch)
        a = _check_cost(a)
        code, node = K.k_search_path(self.st, v, ch, a)
        if int(code) == 2:
            raise RootOperationError("dsearchcost of a root vertex")
        return int(node)

    # -- updates ---------------------------------------------------------

    def dupdate(self, v, ch, a):
        """Add a to every arc cost on the path v..root (no-op at a root)."""
        v = self._check_vertex(v)
        ch = self._check_channel(ch)
        a = _check_cost(a)
        code = int(K.k_update_path(self.st, v, ch, a))
        if code == 1:
            raise CostOverflowError("dupdate would overflow a path cost")

    def dminuscost(self, v, ch=0):
        """Negate every arc cost on the path v..root (no-op at a root)."""
        v = self._check_vertex(v)
        ch = self._check_channel(ch)
        K.k_negate_path(self.st, v, ch)

    def dlink(self, v, w, costs):
        """Add the arc (w, v): v must be a root, w in a different tree.

        w's tree ends up hanging under v through the new arc; when w is not
        the root of its own tree, that tree is first re-rooted at w (the
        only orientation under which the combined structure stays a tree).
        """
        v = self._check_vertex(v)
        w = self._check_vertex(w)
        costs = [_check_cost(c) for c in costs]
        if len(costs) != self.channels:
            raise ChannelError(
                f"dlink needs {self.channels} cost values, got {len(costs)}"
            )
        if int(K.k_repr_root(self.st, v)) != v:
            raise LinkError("dlink target v is not a tree root")
        if int(K.k_repr_root(self.st, w)) == v:
            raise LinkError("dlink endpoints already share a tree")
        a = self._alloc_arc(costs)
        self.ea[a] = w
        self.eb[a] = v
        K.k_link(self.st, a, v, w)

    def dcut(self, v) -> tuple[int, ...]:
        """Cut the arc (v, dparent(v)); returns the costs it carried."""
        v = self._check_vertex(v)
        a = int(K.k_cut(self.st, v))
        if a == NULL:
            raise RootOperationError("dcut of a root vertex")
        out = tuple(int(self.cost[a, ch]) for ch in range(self.channels))
        self._free_arc(a)
        return out

    def devert(self, v):
        """Re-root v's tree at v, reversing every arc on the old root path."""
        v = self._check_vertex(v)
        K.k_devert(self.st, v)
