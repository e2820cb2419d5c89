"""Naive reference implementations and differential fuzz drivers.

:class:`NaiveList` mirrors the full :class:`~loglists.loglist.LogList`
interface with plain O(n) array splices and scans; :class:`NaiveForest`
mirrors the dynamic-tree operations with a parent map. Both raise the same
exception types as the real structures, so a differential replay can
compare behaviour op for op.

:func:`fuzz` and :func:`fuzz_forest` generate seeded random operation
sequences, replay them against both implementations, and report the first
divergence per case (after greedily shrinking the witness sequence).
Everything is deterministic per seed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BoundaryError,
    ChannelError,
    EmptyListError,
    ForeignHandleError,
    InvalidVertexError,
    LinkError,
    RangeOrderError,
    RootOperationError,
)
from .loglist import LogList, build

_tokens = itertools.count(1)


class NaiveList:
    """Array-backed reference list: same contract, O(n) everything."""

    def __init__(self, values=(), weight_channels: int = 0, weights=None):
        if weights is not None and weight_channels == 0:
            weight_channels = len(weights)
        self.weight_channels = weight_channels
        self._rows: list[list[int]] = []
        self._toks: list[int] = []
        for i, v in enumerate(values):
            row = [int(v)] + [
                int(weights[k][i]) if weights is not None else 0
                for k in range(weight_channels)
            ]
            self._rows.append(row)
            self._toks.append(next(_tokens))

    def _col(self, channel) -> int:
        ch = int(channel)
        if ch < 0 or ch > self.weight_channels:
            raise ChannelError(f"channel {ch} unknown")
        return ch

    def _pos(self, tok) -> int:
        try:
            return self._toks.index(tok)
        except ValueError:
            raise ForeignHandleError(f"{tok!r} not in this list") from None

    def __len__(self):
        return len(self._rows)

    def first(self):
        return self._toks[0] if self._toks else None

    def last(self):
        return self._toks[-1] if self._toks else None

    def get_value(self, tok, channel=0):
        return self._rows[self._pos(tok)][self._col(channel)]

    def succ(self, tok):
        i = self._pos(tok)
        if i + 1 >= len(self._toks):
            raise BoundaryError("succ of the last element")
        return self._toks[i + 1]

    def prec(self, tok):
        i = self._pos(tok)
        if i == 0:
            raise BoundaryError("prec of the first element")
        return self._toks[i - 1]

    def insert(self, other: "NaiveList", tok, side: str = "after"):
        if other is self:
            raise ForeignHandleError("cannot insert a list into itself")
        if not self._rows:
            raise EmptyListError("insert target list is empty")
        i = self._pos(tok)
        at = i + 1 if side == "after" else i
        self._rows[at:at] = other._rows
        self._toks[at:at] = other._toks
        other._rows = []
        other._toks = []
        return self

    def delete(self, x, y) -> "NaiveList":
        i, j = self._pos(x), self._pos(y)
        if i > j:
            raise RangeOrderError("range endpoints out of order")
        out = NaiveList(weight_channels=self.weight_channels)
        out._rows = self._rows[i:j + 1]
        out._toks = self._toks[i:j + 1]
        del self._rows[i:j + 1]
        del self._toks[i:j + 1]
        return out

    def reverse(self, x, y):
        i, j = self._pos(x), self._pos(y)
        if i > j:
            raise RangeOrderError("range endpoints out of order")
        self._rows[i:j + 1] = self._rows[i:j + 1][::-1]
        self._toks[i:j + 1] = self._toks[i:j + 1][::-1]
        return self

    def range_extreme(self, x, y, mode="min", channel=0):
        c = self._col(channel)
        i, j = self._pos(x), self._pos(y)
        if i > j:
            raise RangeOrderError("range endpoints out of order")
        best = i
        for k in range(i, j + 1):
            v = self._rows[k][c]
            if (mode == "min" and v <= self._rows[best][c]) or (
                mode == "max" and v >= self._rows[best][c]
            ):
                best = k  # ties resolve to the largest position
        return self._toks[best]

    def range_add(self, x, y, a, channel=0):
        c = self._col(channel)
        i, j = self._pos(x), self._pos(y)
        if i > j:
            raise RangeOrderError("range endpoints out of order")
        for k in range(i, j + 1):
            self._rows[k][c] += a
        return self

    def range_negate(self, x, y, channel=0):
        c = self._col(channel)
        i, j = self._pos(x), self._pos(y)
        if i > j:
            raise RangeOrderError("range endpoints out of order")
        for k in range(i, j + 1):
            self._rows[k][c] = -self._rows[k][c]
        return self

    def find_rank(self, tok) -> int:
        return self._pos(tok) + 1

    def find_element(self, i) -> int:
        i = int(i)
        if i < 1 or i > len(self._toks):
            raise RangeOrderError(f"position {i} outside 1..{len(self._toks)}")
        return self._toks[i - 1]

    def search_sorted(self, b, channel=0):
        c = self._col(channel)
        best = None
        for k, row in enumerate(self._rows):
            if row[c] == b:
                return self._toks[k]
            if row[c] < b and (best is None or row[c] > self._rows[best][c]):
                best = k
        return None if best is None else self._toks[best]

    def iterate(self, channel=0):
        c = self._col(channel)
        return [row[c] for row in self._rows]

    to_list = iterate


class NaiveForest:
    """Parent-map reference for the dynamic-tree operations."""

    def __init__(self, channels: int = 1):
        self.channels = channels
        self._parent: dict[int, tuple[int, list[int]]] = {}
        self._verts: list[int] = []

    def make_vertex(self) -> int:
        v = len(self._verts)
        self._verts.append(v)
        return v

    def _check(self, v):
        if v not in range(len(self._verts)):
            raise InvalidVertexError(f"{v} is not a live vertex")
        return v

    def _path(self, v):
        # [(child, parent, costs), ...] from v up to the root
        out = []
        while v in self._parent:
            p, costs = self._parent[v]
            out.append((v, p, costs))
            v = p
        return out

    def dparent(self, v):
        self._check(v)
        return self._parent[v][0] if v in self._parent else None

    def droot(self, v):
        self._check(v)
        while v in self._parent:
            v = self._parent[v][0]
        return v

    def dcost(self, v, ch=0):
        self._check(v)
        if v not in self._parent:
            raise RootOperationError("dcost of a root vertex")
        return self._parent[v][1][ch]

    def dmincost(self, v, ch=0, mode="min"):
        self._check(v)
        path = self._path(v)
        if not path:
            raise RootOperationError("dmincost of a root vertex")
        best = None
        best_v = None
        for child, _, costs in path:
            c = costs[ch]
            if best is None or (mode == "min" and c <= best) or (
                mode == "max" and c >= best
            ):
                best = c
                best_v = child  # later entries are closer to the root
        return best_v

    def dsearchcost(self, v, ch, a):
        self._check(v)
        path = self._path(v)
        if not path:
            raise RootOperationError("dsearchcost of a root vertex")
        cand = None
        for child, _, costs in path:
            c = costs[ch]
            if c == a:
                return child
            if c < a:
                cand = child  # increasing costs: the last one below a wins
        if cand is not None:
            return cand
        return self.droot(v)

    def dupdate(self, v, ch, a):
        self._check(v)
        for _, _, costs in self._path(v):
            costs[ch] += a

    def dminuscost(self, v, ch=0):
        self._check(v)
        for _, _, costs in self._path(v):
            costs[ch] = -costs[ch]

    def dlink(self, v, w, costs):
        self._check(v)
        self._check(w)
        if v in self._parent:
            raise LinkError("dlink target v is not a tree root")
        if self.droot(w) == v:
            raise LinkError("dlink endpoints already share a tree")
        self.devert(w)
        self._parent[w] = (v, [int(c) for c in costs])

    def dcut(self, v):
        self._check(v)
        if v not in self._parent:
            raise RootOperationError("dcut of a root vertex")
        _, costs = self._parent.pop(v)
        return tuple(costs)

    def devert(self, v):
        self._check(v)
        path = self._path(v)
        for child, parent, costs in path:
            del self._parent[child]
        for child, parent, costs in path:
            self._parent[parent] = (child, costs)

    def path_monotone(self, v, ch) -> bool:
        costs = [c[ch] for _, _, c in self._path(v)]
        return all(a < b for a, b in zip(costs, costs[1:]))


# -- differential fuzz over lists -------------------------------------------


@dataclass
class Divergence:
    case_seed: int
    step: int
    detail: str
    ops: list = field(default_factory=list)


@dataclass
class FuzzReport:
    cases: int
    ops: int
    divergences: list[Divergence] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.divergences


_LIST_OPS = (
    "get_value", "succ", "prec", "find_rank", "find_element", "endpoint",
    "range_extreme", "range_add", "range_negate", "reverse",
    "delete", "insert", "search_sorted",
)


def _gen_list_case(rng: random.Random, max_len: int, n_ops: int):
    n = rng.randint(0, max_len)
    values = [rng.randint(-50, 50) for _ in range(n)]
    weights = [[rng.randint(-30, 30) for _ in range(n)] for _ in range(2)]
    ops = []
    for _ in range(n_ops):
        kind = rng.choice(_LIST_OPS)
        ops.append((
            kind,
            rng.randrange(1 << 16),  # list slot selector
            rng.randrange(1 << 16),  # rank selector 1
            rng.randrange(1 << 16),  # rank selector 2
            rng.randrange(3),        # channel selector
            rng.randint(-25, 25),    # amount / probe
            rng.randrange(2),        # mode / side bit
        ))
    return values, weights, ops


def _replay_list_case(values, weights, ops, factory):
    """Run one op sequence on (factory(), NaiveList); return first mismatch."""
    lst = factory(values, weights=weights)
    nai = NaiveList(values, weights=weights)
    pairs = [(lst, nai)]
    h2t = dict(zip(lst.element_handles(), nai._toks))

    def state_diff(step):
        for k, (a, b) in enumerate(pairs):
            if len(a) != len(b):
                return f"step {step}: list {k} length {len(a)} != {len(b)}"
            snap = a._snapshot()  # columns: value, rank, weights...
            if len(b):
                rows = np.asarray(b._rows, dtype=np.int64)
                if not np.array_equal(snap[:, 0], rows[:, 0]) or not (
                    np.array_equal(snap[:, 2:], rows[:, 1:])
                ):
                    return f"step {step}: list {k} contents differ"
                if not np.array_equal(
                    snap[:, 1], np.arange(1, len(b) + 1)
                ):
                    return f"step {step}: list {k} failed the index audit"
            fa, fb = a.first(), b.first()
            if (fa is None) != (fb is None) or (
                fa is not None and h2t.get(fa) != fb
            ):
                return f"step {step}: list {k} first() mismatch"
            la, lb = a.last(), b.last()
            if (la is None) != (lb is None) or (
                la is not None and h2t.get(la) != lb
            ):
                return f"step {step}: list {k} last() mismatch"
        return None

    for step, op in enumerate(ops):
        kind, slot, r1, r2, chs, amt, bit = op
        a, b = pairs[slot % len(pairs)]
        n = len(b)
        ch = chs % 3
        try:
            if kind in ("get_value", "succ", "prec", "find_rank"):
                if n == 0:
                    continue
                i = 1 + r1 % n
                ha, hb = a.find_element(i), b.find_element(i)
                if h2t.get(ha) != hb:
                    return Divergence(0, step, f"step {step}: select({i}) mismatch")
                if kind == "get_value":
                    va, vb = a.get_value(ha, ch), b.get_value(hb, ch)
                    if va != vb:
                        return Divergence(0, step, f"step {step}: get_value {va} != {vb}")
                elif kind == "find_rank":
                    if a.find_rank(ha) != b.find_rank(hb):
                        return Divergence(0, step, f"step {step}: find_rank mismatch")
                else:
                    try:
                        va = a.succ(ha) if kind == "succ" else a.prec(ha)
                        err_a = None
                    except BoundaryError as e:
                        va, err_a = None, e
                    try:
                        vb = b.succ(hb) if kind == "succ" else b.prec(hb)
                        err_b = None
                    except BoundaryError as e:
                        vb, err_b = None, e
                    if (err_a is None) != (err_b is None) or (
                        err_a is None and h2t.get(va) != vb
                    ):
                        return Divergence(0, step, f"step {step}: {kind} mismatch")
            elif kind == "find_element":
                if n == 0:
                    continue
                i = 1 + r1 % n
                if h2t.get(a.find_element(i)) != b.find_element(i):
                    return Divergence(0, step, f"step {step}: find_element mismatch")
            elif kind == "endpoint":
                side = "first" if bit == 0 else "last"
                ea, eb = a.endpoint(side), b.first() if bit == 0 else b.last()
                if (ea is None) != (eb is None) or (
                    ea is not None and h2t.get(ea) != eb
                ):
                    return Divergence(0, step, f"step {step}: endpoint mismatch")
            elif kind == "range_extreme":
                if n == 0:
                    continue
                i, j = sorted((1 + r1 % n, 1 + r2 % n))
                mode = "min" if bit == 0 else "max"
                ha = a.range_extreme(a.find_element(i), a.find_element(j), mode, ch)
                hb = b.range_extreme(b.find_element(i), b.find_element(j), mode, ch)
                if h2t.get(ha) != hb:
                    return Divergence(0, step, f"step {step}: range_extreme mismatch")
            elif kind == "range_add":
                if n == 0:
                    continue
                i, j = sorted((1 + r1 % n, 1 + r2 % n))
                a.range_add(a.find_element(i), a.find_element(j), amt, ch)
                b.range_add(b.find_element(i), b.find_element(j), amt, ch)
            elif kind == "range_negate":
                if n == 0:
                    continue
                i, j = sorted((1 + r1 % n, 1 + r2 % n))
                a.range_negate(a.find_element(i), a.find_element(j), ch)
                b.range_negate(b.find_element(i), b.find_element(j), ch)
            elif kind == "reverse":
                if n == 0:
                    continue
                i, j = sorted((1 + r1 % n, 1 + r2 % n))
                a.reverse(a.find_element(i), a.find_element(j))
                b.reverse(b.find_element(i), b.find_element(j))
            elif kind == "delete":
                if n == 0:
                    continue
                i, j = sorted((1 + r1 % n, 1 + r2 % n))
                da = a.delete(a.find_element(i), a.find_element(j))
                db = b.delete(b.find_element(i), b.find_element(j))
                pairs.append((da, db))
            elif kind == "insert":
                if len(pairs) < 2:
                    continue
                di = r2 % len(pairs)
                da, db = pairs[di]
                if da is a or len(db) == 0 or n == 0:
                    continue
                i = 1 + r1 % n
                side = "after" if bit == 0 else "before"
                a.insert(da, a.find_element(i), side)
                b.insert(db, b.find_element(i), side)
                del pairs[di]
            elif kind == "search_sorted":
                # fresh strictly increasing list, probed on both sides
                k = 1 + r1 % 12
                base = amt
                vals = []
                for t in range(k):
                    base += 1 + (r2 + t) % 5
                    vals.append(base)
                sa = factory(vals, weights=[[0] * k, [0] * k])
                sb = NaiveList(vals, weight_channels=2)
                st = dict(zip(sa.element_handles(), sb._toks))
                probe = amt + (r1 % (6 * k))
                ra, rb = sa.search_sorted(probe), sb.search_sorted(probe)
                if (ra is None) != (rb is None) or (
                    ra is not None and st.get(ra) != rb
                ):
                    return Divergence(0, step, f"step {step}: search_sorted mismatch")
        except (RangeOrderError, EmptyListError, ForeignHandleError) as e:
            return Divergence(0, step, f"step {step}: unexpected error {e!r}")
        bad = state_diff(step)
        if bad:
            return Divergence(0, step, bad)
    return None


def _shrink(ops, diverges):
    """Greedy one-op-removal shrink of a diverging sequence."""
    ops = list(ops)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(ops):
            cand = ops[:i] + ops[i + 1:]
            if cand and diverges(cand):
                ops = cand
                changed = True
            else:
                i += 1
    return ops


def fuzz(seed: int, cases: int, max_len: int = 128, ops_per_case: int = 100,
         factory=None, shrink: bool = True) -> FuzzReport:
    """Differential fuzz of the list against :class:`NaiveList`."""
    factory = factory or build
    total_ops = 0
    report = FuzzReport(cases=cases, ops=0)
    for case in range(cases):
        rng = random.Random((seed, case))
        values, weights, ops = _gen_list_case(rng, max_len, ops_per_case)
        total_ops += len(ops)
        div = _replay_list_case(values, weights, ops, factory)
        if div is not None:
            witness = ops[: div.step + 1]
            if shrink:
                witness = _shrink(
                    witness,
                    lambda seq: _replay_list_case(values, weights, seq, factory)
                    is not None,
                )
            div.case_seed = case
            div.ops = witness
            report.divergences.append(div)
    report.ops = total_ops
    return report


# -- differential fuzz over forests ------------------------------------------


def _replay_forest_case(ops, channels, forest_cls):
    f = forest_cls(channels=channels)
    nf = NaiveForest(channels=channels)
    fv: list[int] = []  # naive vertex number -> forest vertex id
    back: dict[int, int] = {}

    def m(v):  # naive -> forest
        return fv[v]

    def r(x):  # forest result -> naive numbering
        return None if x is None else back[x]

    def audit(step, verts):
        for v in verts:
            pa = r(f.dparent(m(v)))
            pb = nf.dparent(v)
            if pa != pb:
                return f"step {step}: dparent({v}) {pa} != {pb}"
            if pb is not None:
                for ch in range(channels):
                    ca, cb = f.dcost(m(v), ch), nf.dcost(v, ch)
                    if ca != cb:
                        return f"step {step}: dcost({v},{ch}) {ca} != {cb}"
        return None

    for step, op in enumerate(ops):
        kind, s1, s2, chs, amt = op
        ch = chs % channels
        nv = len(fv)
        try:
            if kind == "make_vertex":
                va = f.make_vertex()
                vb = nf.make_vertex()
                fv.append(va)
                back[va] = vb
            elif nv == 0:
                continue
            elif kind == "dlink":
                v = nf.droot(s1 % nv)
                w = s2 % nv
                if nf.droot(w) == v:
                    continue
                costs = [amt + ch for ch in range(channels)]
                f.dlink(m(v), m(w), costs)
                nf.dlink(v, w, costs)
            elif kind == "dcut":
                v = s1 % nv
                if nf.dparent(v) is None:
                    continue
                ca, cb = f.dcut(m(v)), nf.dcut(v)
                if ca != cb:
                    return Divergence(0, step, f"step {step}: dcut costs {ca} != {cb}")
            elif kind == "devert":
                v = s1 % nv
                f.devert(m(v))
                nf.devert(v)
            elif kind == "dupdate":
                v = s1 % nv
                f.dupdate(m(v), ch, amt)
                nf.dupdate(v, ch, amt)
            elif kind == "dminuscost":
                v = s1 % nv
                f.dminuscost(m(v), ch)
                nf.dminuscost(v, ch)
            elif kind == "droot":
                v = s1 % nv
                if r(f.droot(m(v))) != nf.droot(v):
                    return Divergence(0, step, f"step {step}: droot({v}) mismatch")
            elif kind == "dparent":
                v = s1 % nv
                if r(f.dparent(m(v))) != nf.dparent(v):
                    return Divergence(0, step, f"step {step}: dparent({v}) mismatch")
            elif kind == "dcost":
                v = s1 % nv
                if nf.dparent(v) is None:
                    continue
                if f.dcost(m(v), ch) != nf.dcost(v, ch):
                    return Divergence(0, step, f"step {step}: dcost({v}) mismatch")
            elif kind == "dmincost":
                v = s1 % nv
                if nf.dparent(v) is None:
                    continue
                mode = "min" if s2 % 2 == 0 else "max"
                if r(f.dmincost(m(v), ch, mode)) != nf.dmincost(v, ch, mode):
                    return Divergence(0, step, f"step {step}: dmincost({v}) mismatch")
            elif kind == "dsearchcost":
                v = s1 % nv
                if nf.dparent(v) is None or not nf.path_monotone(v, ch):
                    continue
                if r(f.dsearchcost(m(v), ch, amt)) != nf.dsearchcost(v, ch, amt):
                    return Divergence(0, step, f"step {step}: dsearchcost mismatch")
        except (RootOperationError, LinkError, InvalidVertexError) as e:
            return Divergence(0, step, f"step {step}: unexpected error {e!r}")
        if kind in ("dlink", "dcut", "devert", "dupdate", "dminuscost") and fv:
            # spot-check a deterministic slice; the full audit runs at the end
            base = (s1 + step) % len(fv)
            verts = [(base + k) % len(fv) for k in range(min(8, len(fv)))]
            bad = audit(step, set(verts))
            if bad:
                return Divergence(0, step, bad)
    if fv:
        bad = audit(len(ops), range(len(fv)))
        if bad:
            return Divergence(0, len(ops) - 1, bad)
    return None


_FOREST_OPS = (
    "make_vertex", "make_vertex", "dlink", "dlink", "dcut", "devert",
    "dupdate", "dminuscost", "droot", "dparent", "dcost", "dmincost",
    "dsearchcost",
)


def fuzz_forest(seed: int, cases: int, max_vertices: int = 64,
                ops_per_case: int = 60, channels: int = 2,
                shrink: bool = True) -> FuzzReport:
    """Differential fuzz of the forest against :class:`NaiveForest`."""
    from .forest import Forest

    report = FuzzReport(cases=cases, ops=0)
    total = 0
    for case in range(cases):
        rng = random.Random((seed, "forest", case))
        ops = []
        for _ in range(ops_per_case):
            kind = rng.choice(_FOREST_OPS)
            if kind == "make_vertex" and sum(
                1 for o in ops if o[0] == "make_vertex"
            ) >= max_vertices:
                kind = "devert"
            ops.append((
                kind,
                rng.randrange(1 << 16),
                rng.randrange(1 << 16),
                rng.randrange(channels),
                rng.randint(-40, 40),
            ))
        total += len(ops)
        div = _replay_forest_case(ops, channels, Forest)
        if div is not None:
            witness = ops[: div.step + 1]
            if shrink:
                witness = _shrink(
                    witness,
                    lambda seq: _replay_forest_case(seq, channels, Forest)
                    is not None,
                )
            div.case_seed = case
            div.ops = witness
            report.divergences.append(div)
    report.ops = total
    return report
