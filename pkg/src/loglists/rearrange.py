"""Permutation rearrangement moves and sorting by prefix operations.

Covers three things:

* applying single rearrangement moves -- transpositions ``tr``, reversals
  ``rv`` (unsigned) / ``rvs`` (signed), their prefix forms ``preftr`` /
  ``prefrv``, and block interchanges ``bi`` -- to a permutation, executed
  through list splices and reversals (:func:`apply_op`) or by direct array
  substitution (:func:`apply_op_array`, the independent reference);
* the greedy strip-merging sorter by prefix reversals and prefix
  transpositions, in two builds: :func:`sort_prefix_rt` runs on a
  :class:`~loglists.loglist.LogList` in O(n log n) total, while
  :func:`sort_prefix_rt_naive` runs the same decision sequence on plain
  arrays in O(n^2) and doubles as oracle and baseline;
* the block-tree interface :func:`ptree_join` / :func:`ptree_split` /
  :func:`ptree_block_max` used by block-based sorting algorithms.

Index conventions are 1-based everywhere: ``tr(i, j, k)`` moves the block
at positions i..j-1 to sit between the old positions k-1 and k
(1 <= i < j < k <= n+1); ``rv(i, j)`` reverses positions i..j
(1 <= i <= j <= n); ``bi(i, j, k, l)`` swaps the blocks i..j-1 and k..l-1
(1 <= i < j <= k < l <= n+1). A signed reversal also negates the block.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from ._backend import njit
from .errors import LogListsError, RangeOrderError
from .loglist import LogList, _IDX, build

__all__ = [
    "Permutation",
    "RearrangeOp",
    "SortTrace",
    "StripIndex",
    "apply_op",
    "apply_op_array",
    "strip_scan",
    "sort_prefix_rt",
    "sort_prefix_rt_naive",
    "ptree_join",
    "ptree_split",
    "ptree_block_max",
]


class RearrangeError(LogListsError):
    """Invalid permutation, move out of bounds, or signedness mismatch."""


@dataclass(frozen=True)
class Permutation:
    """A (possibly signed) permutation: |elements| is a bijection on 1..n."""

    elements: tuple[int, ...]
    signed: bool = False

    def __post_init__(self):
        n = len(self.elements)
        seen = [False] * (n + 1)
        for v in self.elements:
            a = abs(v)
            if v < 0 and not self.signed:
                raise RearrangeError("negative element in an unsigned permutation")
            if a < 1 or a > n or seen[a]:
                raise RearrangeError(
                    f"values are not a permutation of 1..{n}"
                )
            seen[a] = True

    @property
    def n(self) -> int:
        return len(self.elements)

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.elements))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def random(n: int, rng: random.Random, signed: bool = False) -> "Permutation":
        vals = list(range(1, n + 1))
        rng.shuffle(vals)
        if signed:
            vals = [v if rng.random() < 0.5 else -v for v in vals]
        return Permutation(tuple(vals), signed=signed)


_OP_ARITY = {"tr": 3, "rv": 2, "rvs": 2, "preftr": 2, "prefrv": 1, "bi": 4}


@dataclass(frozen=True)
class RearrangeOp:
    """One rearrangement move with 1-based indices."""

    kind: str
    params: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in _OP_ARITY:
            raise RearrangeError(f"unknown move kind {self.kind!r}")
        if len(self.params) != _OP_ARITY[self.kind]:
            raise RearrangeError(
                f"{self.kind} takes {_OP_ARITY[self.kind]} indices, "
                f"got {len(self.params)}"
            )

    def validate(self, n: int, signed: bool = False):
        p = self.params
        ok = True
        if self.kind == "tr":
            i, j, k = p
            ok = 1 <= i < j < k <= n + 1
        elif self.kind in ("rv", "rvs"):
            i, j = p
            ok = 1 <= i <= j <= n
            if self.kind == "rvs" and not signed:
                raise RearrangeError("signed reversal on an unsigned permutation")
        elif self.kind == "preftr":
            j, k = p
            ok = 1 < j < k <= n + 1
        elif self.kind == "prefrv":
            (j,) = p
            ok = 1 <= j <= n
        elif self.kind == "bi":
            i, j, k, l = p
            ok = 1 <= i < j <= k < l <= n + 1
        if not ok:
            raise RearrangeError(
                f"{self.kind}{self.params} out of bounds for n={n}"
            )


def apply_op_array(values, op: RearrangeOp, signed: bool = False) -> list[int]:
    """Apply one move to a plain value list by index substitution."""
    vals = list(values)
    n = len(vals)
    op.validate(n, signed=signed)
    p = op.params
    if op.kind in ("tr", "preftr"):
        i, j, k = (1, *p) if op.kind == "preftr" else p
        return vals[: i - 1] + vals[j - 1 : k - 1] + vals[i - 1 : j - 1] + vals[k - 1 :]
    if op.kind in ("rv", "rvs", "prefrv"):
        i, j = (1, *p) if op.kind == "prefrv" else p
        block = vals[i - 1 : j][::-1]
        if op.kind == "rvs":
            block = [-v for v in block]
        return vals[: i - 1] + block + vals[j:]
    i, j, k, l = p
    return (
        vals[: i - 1]
        + vals[k - 1 : l - 1]
        + vals[j - 1 : k - 1]
        + vals[i - 1 : j - 1]
        + vals[l - 1 :]
    )


def _apply_to_loglist(L: LogList, op: RearrangeOp):
    """Run one move on a list via delete/insert/reverse/negate splices."""
    p = op.params
    if op.kind in ("tr", "preftr"):
        i, j, k = (1, *p) if op.kind == "preftr" else p
        hx = L.find_element(i)
        hy = L.find_element(j - 1)
        anchor = L.find_element(k - 1)  # k - 1 >= j: outside the moved block
        block = L.delete(hx, hy)
        L.insert(block, anchor, "after")
    elif op.kind in ("rv", "rvs", "prefrv"):
        i, j = (1, *p) if op.kind == "prefrv" else p
        hx = L.find_element(i)
        hy = L.find_element(j)
        L.reverse(hx, hy)
        if op.kind == "rvs":
            L.range_negate(hy, hx)  # the block now runs hy..hx
    else:
        i, j, k, l = p
        ha1, ha2 = L.find_element(i), L.find_element(j - 1)
        hb1, hb2 = L.find_element(k), L.find_element(l - 1)
        prev_a = L.find_element(i - 1) if i > 1 else None
        anchor_a = L.find_element(k - 1) if k > j else hb2
        blk_b = L.delete(hb1, hb2)
        blk_a = L.delete(ha1, ha2)
        if len(L) == 0:
            L = blk_b
        elif prev_a is not None:
            L.insert(blk_b, prev_a, "after")
        else:
            L.insert(blk_b, L.first(), "before")
        L.insert(blk_a, anchor_a, "after")
    return L


def apply_op(P: Permutation, op: RearrangeOp) -> Permutation:
    """Apply one move to a permutation (through list splices)."""
    op.validate(P.n, signed=P.signed)
    L = build(list(P.elements))
    L = _apply_to_loglist(L, op)
    return Permutation(tuple(L.to_list()), signed=P.signed)


@dataclass
class SortTrace:
    """An ordered move sequence; its length is the reported distance d."""

    ops: list[RearrangeOp] = field(default_factory=list)

    @property
    def d(self) -> int:
        return len(self.ops)

    def replay(self, P: Permutation) -> Permutation:
        vals = list(P.elements)
        for op in self.ops:
            vals = apply_op_array(vals, op, signed=P.signed)
        return Permutation(tuple(vals), signed=P.signed)


# -- strips ------------------------------------------------------------------


@dataclass
class StripIndex:
    """Endpoint markers for the maximal runs of consecutive integers.

    ``other_end[v]`` is the value at the opposite end of v's strip when v
    is a strip endpoint (v itself for singleton strips) and 0 when v is
    interior. The orientation-dependent begin/end views are derived from a
    sequence on demand; the stored form is orientation-free so a block
    reversal leaves interior strips' entries untouched.
    """

    size: int
    other_end: np.ndarray

    def b_view(self, seq) -> dict[int, int]:
        """v -> first element of v's strip, for every strip-last v."""
        pos = {v: i for i, v in enumerate(seq)}
        out = {}
        for v in seq:
            o = int(self.other_end[v])
            if o != 0 and pos[v] >= pos[o]:
                out[v] = o
        return out

    def e_view(self, seq) -> dict[int, int]:
        """v -> last element of v's strip, for every strip-first v."""
        pos = {v: i for i, v in enumerate(seq)}
        out = {}
        for v in seq:
            o = int(self.other_end[v])
            if o != 0 and pos[v] <= pos[o]:
                out[v] = o
        return out


def strip_scan(perm) -> StripIndex:
    """Identify all strips of a sequence in one O(n) pass."""
    if isinstance(perm, Permutation):
        seq = list(perm.elements)
    else:
        seq = [int(v) for v in perm]
    m = len(seq)
    if sorted(seq) != list(range(1, m + 1)):
        raise RearrangeError(f"values are not a permutation of 1..{m}")
    ends = np.zeros(m + 1, np.int32)
    i = 0
    while i < m:
        j = i
        if j + 1 < m and abs(seq[j + 1] - seq[j]) == 1:
            step = seq[j + 1] - seq[j]
            while j + 1 < m and seq[j + 1] - seq[j] == step:
                j += 1
        ends[seq[i]] = seq[j]
        ends[seq[j]] = seq[i]
        i = j + 1
    return StripIndex(size=m, other_end=ends)


def _merge_strips(ends, u, w, sent):
    # u ends a strip, w begins the next one; glue them if consecutive.
    if abs(u - w) != 1:
        return
    f = int(ends[u])
    l = int(ends[w])
    if f == 0 or l == 0:
        raise RuntimeError("strip marker drift: merging at a non-endpoint")
    ends[f] = l
    ends[l] = f
    if u != f:
        ends[u] = 0
    if w != l:
        ends[w] = 0


def _split_strip_at_sentinel(ends, du, dw, sent):
    # A move can only break a strip at the sentinel junction (.., du, sent).
    if abs(du - dw) != 1:
        return
    if dw != sent:
        raise RuntimeError("strip marker drift: unexpected interior split")
    f = int(ends[sent])
    ends[sent] = sent
    if f == du:
        ends[du] = du
    else:
        ends[f] = du
        ends[du] = f


# -- the sorter, list-backed ---------------------------------------------------

class _SortRun:
    """State for one sort: the list, the value->handle table, strip markers.

    Element handles are stable, so the value->handle table never changes;
    ranks come from one splay per lookup and values at a position from one
    descent of the rank channel. The current first value is carried between
    iterations (after a prefix move it is a value the move already fetched).
    """

    def __init__(self, P: Permutation):
        self.n = P.n
        self.sent = self.n + 1
        vals = list(P.elements) + [self.sent]
        self.L = build(vals)
        self.h = np.zeros(self.n + 2, np.int64)
        for v, a in zip(vals, self.L.element_handles()):
            self.h[v] = a
        self.ends = strip_scan(vals).other_end
        self._st = self.L.forest.st
        self._cost = self.L.forest.cost
        self.p1 = vals[0]

    # positions/values with the conceptual extension p_0 = 0, p_{n+2} = n+2;
    # anything further out is None and fails every guard
    def pos(self, v):
        if v == 0:
            return 0
        if v == self.n + 2:
            return self.n + 2
        if 1 <= v <= self.sent:
            return int(K.k_rank_of(self._st, int(self.h[v]), _IDX))
        return None

    def val(self, p):
        if p == 0:
            return 0
        if p == self.n + 2:
            return self.n + 2
        if 1 <= p <= self.sent:
            arc = int(K.k_list_search(
                self._st, self.L._tailplus, self.L._head, _IDX, p
            ))
            return int(self._cost[arc, 0])
        return None

    def apply_preftr(self, j, k, vj_1, vj, vk_1, vk):
        # move the block at positions 1..j-1 between positions k-1 and k;
        # the caller passes the values at j-1, j, k-1 and k it already read
        L = self.L
        st = self._st
        v1 = self.p1
        la = int(self.h[vj_1])
        anchor = int(self.h[vk_1])
        s = L._take_vertex()
        z, h1 = K.k_splice_out(
            st, L._tailplus, L._first, la, K.NULL, s, _IDX, 0, j - 1
        )
        K.k_splice_in(
            st, L._tailplus, anchor, s, int(h1), la, _IDX, k - j, j - 1
        )
        L._pool_vertex(s)
        L._head = int(z)
        L._first = int(self.h[vj])
        if abs(vj_1 - vj) == 1:
            raise RuntimeError("strip marker drift: block boundary inside a strip")
        _split_strip_at_sentinel(self.ends, vk_1, vk, self.sent)
        _merge_strips(self.ends, vk_1, v1, self.sent)
        _merge_strips(self.ends, vj_1, vk, self.sent)
        self.p1 = vj

    def apply_prefrv(self, j, vj, vj1):
        L = self.L
        v1 = self.p1
        la = int(self.h[vj])
        K.k_reverse_seg(self._st, L._tailplus, L._first, la, _IDX, 0, j)
        L._first = la
        if abs(vj - vj1) == 1:
            raise RuntimeError("strip marker drift: reversal boundary inside a strip")
        _merge_strips(self.ends, v1, vj1, self.sent)
        self.p1 = vj

    def audit_strips(self) -> bool:
        fresh = strip_scan(self.L.to_list()).other_end
        return bool(np.array_equal(fresh, self.ends))


def _decide_move(run: _SortRun):
    """Pick this iteration's prefix move; the run's first value is not 1.

    Returns ("tr", j, k, vj_1, vj, vk_1, vk) or ("rv", j, vj, vj1) carrying
    the block-boundary values the application step needs. Guards that
    reference positions outside 1..n+1 are false; when a taken
    double-concatenation branch fires nothing, the single-concatenation
    fallback of the same iteration decides instead.
    """
    n = run.n
    sent = run.sent
    pos, val = run.pos, run.val
    p1 = run.p1
    strip_end = int(run.ends[p1])

    a = pos(p1 - 1) + 1  # position just after the value p1 - 1
    pa = val(a)
    y = None
    if abs((p1 - 1) - pa) != 1:
        la = pos(pa - 1) + 1
        vla = vla1 = None
        if 2 <= la <= sent:
            vla = val(la)
            vla1 = val(la - 1)
        if vla is not None and vla != 1 and abs(vla1 - vla) != 1:
            if la < a:
                return ("tr", la, a, vla1, vla, p1 - 1, pa)
        else:
            ra = pos(pa + 1) + 1
            vra = vra1 = None
            if 2 <= ra <= sent:
                vra = val(ra)
                vra1 = val(ra - 1)
            if vra is not None and vra != 1 and abs(vra1 - vra) != 1 and ra < a:
                return ("tr", ra, a, vra1, vra, p1 - 1, pa)
    else:
        b = pos(p1 + 1) + 1
        y = b - 1
        vb = None
        if 2 <= b <= sent:
            vb = val(b)
        if vb is not None and abs((p1 + 1) - vb) != 1:
            pb = vb
            lb = pos(pb - 1) + 1
            vlb = vlb1 = None
            if 2 <= lb <= sent:
                vlb = val(lb)
                vlb1 = val(lb - 1)
            if vlb is not None and vlb != 1 and abs(vlb1 - vlb) != 1:
                if lb < b:
                    return ("tr", lb, b, vlb1, vlb, p1 + 1, pb)
            else:
                rb = pos(pb + 1) + 1 if pb + 1 <= n + 2 else None
                vrb = vrb1 = None
                if rb is not None and 2 <= rb <= sent:
                    vrb = val(rb)
                    vrb1 = val(rb - 1)
                if vrb is not None and vrb != 1 and abs(vrb1 - vrb) != 1 and rb < b:
                    return ("tr", rb, b, vrb1, vrb, p1 + 1, pb)
    # single-concatenation fallback
    if p1 <= strip_end:
        x = a - 1  # the position of p1 - 1
        if (p1 - 1) == pa + 1:
            return ("rv", x - 1, val(x - 1), p1 - 1)
        i = pos(strip_end)
        return ("tr", i + 1, x + 1, strip_end, val(i + 1), p1 - 1, pa)
    if y is None:
        y = pos(p1 + 1)
    vy1 = val(y - 1)
    if (p1 + 1) == vy1 - 1:
        i = pos(strip_end)
        return ("tr", i + 1, y + 1, strip_end, val(i + 1), p1 + 1, val(y + 1))
    return ("rv", y - 1, vy1, p1 + 1)


def sort_prefix_rt(P: Permutation, audit=None) -> SortTrace:
    """Sort by prefix reversals and prefix transpositions, list-backed.

    Each iteration costs O(log n): the first strip's far end comes from the
    strip markers, element/position lookups from the list's rank machinery,
    and the move itself is a splice or a reversal of the list. `audit`,
    when given, is called after every applied move with the run state
    (tests use it to compare the incremental strip markers with a rescan).
    """
    if P.signed:
        raise RearrangeError("the prefix sorter takes unsigned permutations")
    n = P.n
    run = _SortRun(P)
    sent = run.sent
    ops: list[RearrangeOp] = []
    limit = 8 * n + 64
    while True:
        p1 = run.p1
        strip_end = int(run.ends[p1])
        if strip_end == sent:
            break  # the first strip reaches the sentinel: sorted
        if len(ops) >= limit:
            raise RuntimeError("prefix sorter failed to make progress")
        if p1 == 1:
            i = run.pos(strip_end)
            move = ("tr", i + 1, n + 1, strip_end, run.val(i + 1),
                    run.val(n), sent)
        else:
            move = _decide_move(run)
        if move[0] == "tr":
            _, j, k, vj_1, vj, vk_1, vk = move
            run.apply_preftr(j, k, vj_1, vj, vk_1, vk)
            ops.append(RearrangeOp("preftr", (j, k)))
        else:
            _, j, vj, vj1 = move
            run.apply_prefrv(j, vj, vj1)
            ops.append(RearrangeOp("prefrv", (j,)))
        if audit is not None:
            audit(run)
    return SortTrace(ops)


# -- the sorter, array-backed ---------------------------------------------------


@njit(cache=True)
def _sort_naive_kernel(p, pinv, n, kinds, aa, bb):
    # p/pinv are 1-based with conceptual entries at 0 and n+2; the trace is
    # written to kinds/aa/bb (0 = preftr, 1 = prefrv); returns d, or -1 when
    # the trace arrays are too small.
    cap = kinds.shape[0]
    top = n + 1
    d = 0
    buf = np.empty(n + 2, np.int64)
    while True:
        done = True
        for t in range(1, n + 2):
            if p[t] != t:
                done = False
                break
        if done:
            return d
        i = 1
        while i <= n and (p[i + 1] - p[i] == 1 or p[i] - p[i + 1] == 1):
            i += 1
        p1 = p[1]
        kind = -1
        ja = 0
        jb = 0
        if p1 == 1:
            kind = 0
            ja = i + 1
            jb = n + 1
        else:
            a = pinv[p1 - 1] + 1
            pa = p[a]
            if abs(p[a - 1] - pa) != 1:
                la = pinv[pa - 1] + 1
                if 2 <= la <= top and p[la] != 1 and abs(p[la - 1] - p[la]) != 1:
                    if la < a:
                        kind = 0
                        ja = la
                        jb = a
                else:
                    ra = -100
                    if pa + 1 <= n + 2:
                        ra = pinv[pa + 1] + 1
                    if 2 <= ra <= top and p[ra] != 1 and abs(p[ra - 1] - p[ra]) != 1:
                        if ra < a:
                            kind = 0
                            ja = ra
                            jb = a
            else:
                b = pinv[p1 + 1] + 1
                if 2 <= b <= top and abs(p[b - 1] - p[b]) != 1:
                    pb = p[b]
                    lb = pinv[pb - 1] + 1
                    if 2 <= lb <= top and p[lb] != 1 and abs(p[lb - 1] - p[lb]) != 1:
                        if lb < b:
                            kind = 0
                            ja = lb
                            jb = b
                    else:
                        rb = -100
                        if pb + 1 <= n + 2:
                            rb = pinv[pb + 1] + 1
                        if 2 <= rb <= top and p[rb] != 1 and abs(p[rb - 1] - p[rb]) != 1:
                            if rb < b:
                                kind = 0
                                ja = rb
                                jb = b
            if kind == -1:
                if p1 <= p[i]:
                    x = pinv[p1 - 1]
                    if p[x] == p[x + 1] + 1:
                        kind = 1
                        ja = x - 1
                    else:
                        kind = 0
                        ja = i + 1
                        jb = x + 1
                else:
                    y = pinv[p1 + 1]
                    if p[y] == p[y - 1] - 1:
                        kind = 0
                        ja = i + 1
                        jb = y + 1
                    else:
                        kind = 1
                        ja = y - 1
        if d >= cap:
            return -1
        kinds[d] = kind
        aa[d] = ja
        bb[d] = jb
        d += 1
        if kind == 0:
            m = ja - 1
            for t in range(m):
                buf[t] = p[1 + t]
            for t in range(jb - ja):
                p[1 + t] = p[ja + t]
            for t in range(m):
                p[jb - m + t] = buf[t]
            for t in range(1, jb):
                pinv[p[t]] = t
        else:
            lo = 1
            hi = ja
            while lo < hi:
                tmp = p[lo]
                p[lo] = p[hi]
                p[hi] = tmp
                lo += 1
                hi -= 1
            for t in range(1, ja + 1):
                pinv[p[t]] = t


def sort_prefix_rt_naive(P: Permutation) -> SortTrace:
    """Array-backed build of the same sorter: O(n^2), same move sequence."""
    if P.signed:
        raise RearrangeError("the prefix sorter takes unsigned permutations")
    n = P.n
    cap = 4 * n + 16
    while True:
        p = np.zeros(n + 3, np.int64)
        p[1 : n + 1] = P.elements
        p[n + 1] = n + 1
        p[n + 2] = n + 2
        pinv = np.zeros(n + 3, np.int64)
        for t in range(n + 3):
            pinv[p[t]] = t
        kinds = np.empty(cap, np.int8)
        aa = np.empty(cap, np.int32)
        bb = np.empty(cap, np.int32)
        d = int(_sort_naive_kernel(p, pinv, n, kinds, aa, bb))
        if d >= 0:
            break
        cap *= 2
    ops = []
    for t in range(d):
        if kinds[t] == 0:
            ops.append(RearrangeOp("preftr", (int(aa[t]), int(bb[t]))))
        else:
            ops.append(RearrangeOp("prefrv", (int(aa[t]),)))
    return SortTrace(ops)


# -- block-tree interface -------------------------------------------------------


def ptree_join(a: LogList, b: LogList) -> LogList:
    """Concatenate two neighboring blocks; returns the combined list."""
    if a is b:
        raise RangeOrderError("cannot join a list with itself")
    if len(a) == 0:
        return b
    if len(b) == 0:
        return a
    a.insert(b, a.last(), "after")
    return a


def ptree_split(a: LogList, i: int) -> tuple[LogList, LogList]:
    """Split off the first i elements: returns (prefix, suffix)."""
    i = int(i)
    if i < 0 or i > len(a):
        raise RangeOrderError(f"split position {i} outside 0..{len(a)}")
    if i == 0:
        return LogList(a.forest), a
    if i == len(a):
        return a, LogList(a.forest)
    prefix = a.delete(a.find_element(1), a.find_element(i))
    return prefix, a


def ptree_block_max(a: LogList, x, y):
    """Handle of the maximum element in the block x..y."""
    return a.range_extreme(x, y, "max")
