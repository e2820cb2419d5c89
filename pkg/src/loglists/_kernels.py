"""Splay-forest kernels over a numpy node arena.

Every function takes the arena as a tuple ``st`` of preallocated arrays and
works by index chasing; under the numba backend the whole module compiles to
machine code. Layout of ``st`` (see ``forest.Forest``):

    0  left   int32[cap]    splay left child, -1 = none
    1  right  int32[cap]    splay right child
    2  par    int32[cap]    splay parent, or path-parent at a splay root
    3  flip   uint8[cap]    pending orientation reversal for the children
    4  isarc  uint8[cap]    1 for arc nodes, 0 for vertices
    5  nsub   int32[cap]    number of arc nodes in the splay subtree
    6  ea     int32[cap]    one endpoint vertex of an arc (unordered pair)
    7  eb     int32[cap]    the other endpoint
    8  cost   int64[cap,C]  per-channel cost carried by an arc
    9  mn     int64[cap,C]  per-channel subtree minimum over arcs
    10 mx     int64[cap,C]  per-channel subtree maximum over arcs
    11 add    int64[cap,C]  pending addition for the children
    12 neg    uint8[cap,C]  pending negation for the children
    13 stack  int32[cap]    scratch for iterative splay/traversal

Nodes are vertices or arcs of a forest whose represented trees interleave
them (vertex, arc, vertex, ...), so arc costs survive re-rooting untouched.
Preferred paths are stored as splay trees whose in-order runs from the
represented root (leftmost) down to the exposed node (rightmost). Pending
tags apply to a node's children in the fixed order flip, negate, add.

The ``k_*`` list kernels (search, segment, splice, snapshot, adjacency)
assume and preserve the list's standard orientation: the tail+ vertex is
the represented root on entry and again on return. Kernels that re-root
internally restore it before returning.

All value arithmetic is guarded elsewhere to |v| <= COST_LIMIT so that tag
composition (bounded by twice that) cannot wrap int64.
"""

import numpy as np

from ._backend import njit

NULL = -1
COST_LIMIT = 1 << 61


@njit(cache=True)
def _is_sroot(st, x):
    left, right, par = st[0], st[1], st[2]
    p = par[x]
    return p == NULL or (left[p] != x and right[p] != x)


@njit(cache=True)
def _apply_flip(st, x):
    left, right, flip = st[0], st[1], st[3]
    t = left[x]
    left[x] = right[x]
    right[x] = t
    flip[x] ^= 1


@njit(cache=True)
def _apply_neg(st, x, ch):
    isarc, nsub = st[4], st[5]
    cost, mn, mx, add, neg = st[8], st[9], st[10], st[11], st[12]
    if nsub[x] == 0:
        return
    if isarc[x]:
        cost[x, ch] = -cost[x, ch]
    t = mn[x, ch]
    mn[x, ch] = -mx[x, ch]
    mx[x, ch] = -t
    add[x, ch] = -add[x, ch]
    neg[x, ch] ^= 1


@njit(cache=True)
def _apply_add(st, x, ch, a):
    isarc, nsub = st[4], st[5]
    cost, mn, mx, add = st[8], st[9], st[10], st[11]
    if nsub[x] == 0:
        return
    if isarc[x]:
        cost[x, ch] += a
    mn[x, ch] += a
    mx[x, ch] += a
    add[x, ch] += a


@njit(cache=True)
def _push(st, x):
    left, right, flip = st[0], st[1], st[3]
    add, neg = st[11], st[12]
    if flip[x]:
        l = left[x]
        if l != NULL:
            _apply_flip(st, l)
        r = right[x]
        if r != NULL:
            _apply_flip(st, r)
        flip[x] = 0
    nch = add.shape[1]
    for ch in range(nch):
        if neg[x, ch]:
            l = left[x]
            if l != NULL:
                _apply_neg(st, l, ch)
            r = right[x]
            if r != NULL:
                _apply_neg(st, r, ch)
            neg[x, ch] = 0
        a = add[x, ch]
        if a != 0:
            l = left[x]
            if l != NULL:
                _apply_add(st, l, ch, a)
            r = right[x]
            if r != NULL:
                _apply_add(st, r, ch, a)
            add[x, ch] = 0


@njit(cache=True)
def _pull(st, x):
    left, right = st[0], st[1]
    isarc, nsub = st[4], st[5]
    cost, mn, mx = st[8], st[9], st[10]
    l = left[x]
    r = right[x]
    ns = 0
    if l != NULL:
        ns += nsub[l]
    if r != NULL:
        ns += nsub[r]
    if isarc[x]:
        ns += 1
    nsub[x] = ns
    if ns == 0:
        return
    nch = cost.shape[1]
    for ch in range(nch):
        has = False
        lo = np.int64(0)
        hi = np.int64(0)
        if isarc[x]:
            lo = cost[x, ch]
            hi = cost[x, ch]
            has = True
        if l != NULL and nsub[l] > 0:
            if has:
                if mn[l, ch] < lo:
                    lo = mn[l, ch]
                if mx[l, ch] > hi:
                    hi = mx[l, ch]
            else:
                lo = mn[l, ch]
                hi = mx[l, ch]
                has = True
        if r != NULL and nsub[r] > 0:
            if has:
                if mn[r, ch] < lo:
                    lo = mn[r, ch]
                if mx[r, ch] > hi:
                    hi = mx[r, ch]
            else:
                lo = mn[r, ch]
                hi = mx[r, ch]
        mn[x, ch] = lo
        mx[x, ch] = hi


@njit(cache=True)
def _rot(st, x):
    left, right, par = st[0], st[1], st[2]
    p = par[x]
    g = par[p]
    p_root = _is_sroot(st, p)
    if left[p] == x:
        t = right[x]
        left[p] = t
        if t != NULL:
            par[t] = p
        right[x] = p
    else:
        t = left[x]
        right[p] = t
        if t != NULL:
            par[t] = p
        left[x] = p
    par[p] = x
    par[x] = g
    if not p_root:
        if left[g] == p:
            left[g] = x
        elif right[g] == p:
            right[g] = x
    _pull(st, p)
    _pull(st, x)


@njit(cache=True)
def _splay(st, x):
    left, par = st[0], st[2]
    stack = st[13]
    top = 0
    y = x
    stack[top] = y
    top += 1
    while not _is_sroot(st, y):
        y = par[y]
        stack[top] = y
        top += 1
    i = top - 1
    while i >= 0:
        _push(st, stack[i])
        i -= 1
    while not _is_sroot(st, x):
        p = par[x]
        if _is_sroot(st, p):
            _rot(st, x)
        else:
            g = par[p]
            if (left[g] == p) == (left[p] == x):
                _rot(st, p)
                _rot(st, x)
            else:
                _rot(st, x)
                _rot(st, x)


@njit(cache=True)
def _expose(st, x):
    # Make the represented-root..x path one splay tree with x at its root.
    right, par = st[1], st[2]
    _splay(st, x)
    if right[x] != NULL:
        right[x] = NULL
        _pull(st, x)
    while par[x] != NULL:
        y = par[x]
        _splay(st, y)
        right[y] = x
        _pull(st, y)
        _splay(st, x)


@njit(cache=True)
def _leftmost(st, x):
    left = st[0]
    _push(st, x)
    while left[x] != NULL:
        x = left[x]
        _push(st, x)
    return x


@njit(cache=True)
def _pred(st, x):
    # In-order predecessor inside x's splay tree; splays it. -1 if none.
    left, right = st[0], st[1]
    _splay(st, x)
    if left[x] == NULL:
        return NULL
    y = left[x]
    _push(st, y)
    while right[y] != NULL:
        y = right[y]
        _push(st, y)
    _splay(st, y)
    return y


@njit(cache=True)
def _succ(st, x):
    left, right = st[0], st[1]
    _splay(st, x)
    if right[x] == NULL:
        return NULL
    y = right[x]
    _push(st, y)
    while left[y] != NULL:
        y = left[y]
        _push(st, y)
    _splay(st, y)
    return y


@njit(cache=True)
def _devert(st, v):
    _expose(st, v)
    _apply_flip(st, v)


@njit(cache=True)
def _cut_above(st, x):
    # Detach x from its represented parent; x becomes a represented root.
    left, par = st[0], st[2]
    _expose(st, x)
    l = left[x]
    if l != NULL:
        left[x] = NULL
        par[l] = NULL
        _pull(st, x)


@njit(cache=True)
def _attach(st, child_root, parent):
    # Hang the tree rooted at child_root (a represented root) under parent.
    par = st[2]
    _expose(st, child_root)
    _expose(st, parent)
    par[child_root] = parent


@njit(cache=True)
def _far_endpoint(st, arc):
    # The endpoint of `arc` away from the current represented root.
    ea, eb = st[6], st[7]
    _expose(st, arc)
    ps = _pred(st, arc)
    if ea[arc] == ps:
        return eb[arc]
    return ea[arc]


@njit(cache=True)
def k_repr_root(st, v):
    _expose(st, v)
    r = _leftmost(st, v)
    _splay(st, r)
    return r


@njit(cache=True)
def k_is_repr_root(st, v):
    left = st[0]
    _expose(st, v)
    return left[v] == NULL


@njit(cache=True)
def k_devert(st, v):
    _devert(st, v)


@njit(cache=True)
def k_parent_vertex(st, v):
    # Represented parent vertex of v, skipping the arc node. -1 at a root.
    _expose(st, v)
    a = _pred(st, v)
    if a == NULL:
        return NULL
    return _pred(st, a)


@njit(cache=True)
def k_above_arc(st, v):
    # Arc node between v and its represented parent; -1 at a root.
    _expose(st, v)
    return _pred(st, v)


@njit(cache=True)
def k_cut(st, v):
    # Remove the arc above v entirely; v's side becomes a separate tree.
    # Returns the detached arc node (its cost row is resolved), -1 at a root.
    left, right, par = st[0], st[1], st[2]
    _expose(st, v)
    a = _pred(st, v)
    if a == NULL:
        return NULL
    # a is the splay root here; its right subtree is exactly {v}.
    l = left[a]
    r = right[a]
    left[a] = NULL
    right[a] = NULL
    if l != NULL:
        par[l] = NULL
    if r != NULL:
        par[r] = NULL
    par[a] = NULL
    _pull(st, a)
    return a


@njit(cache=True)
def k_link(st, arc, v, w):
    # Attach w's tree below v through a fresh, fully initialized arc node;
    # w's tree is first re-rooted at w so the arc (w, v) is consistent.
    # Caller guarantees v is a represented root and w is in another tree.
    par = st[2]
    _expose(st, v)
    _devert(st, w)
    par[arc] = v
    par[w] = arc


@njit(cache=True)
def k_update_path(st, v, ch, a):
    # Add `a` to every arc cost on the path v..represented-root.
    # 0 = done, 1 = would overflow (state untouched), 2 = empty path.
    nsub, mn, mx = st[5], st[9], st[10]
    _expose(st, v)
    if nsub[v] == 0:
        return 2
    if mn[v, ch] + a < -COST_LIMIT or mn[v, ch] + a > COST_LIMIT:
        return 1
    if mx[v, ch] + a < -COST_LIMIT or mx[v, ch] + a > COST_LIMIT:
        return 1
    _apply_add(st, v, ch, a)
    return 0


@njit(cache=True)
def k_negate_path(st, v, ch):
    nsub = st[5]
    _expose(st, v)
    if nsub[v] == 0:
        return 2
    _apply_neg(st, v, ch)
    return 0


@njit(cache=True)
def _extreme_arc(st, root, ch, want_max):
    # Leftmost (closest to represented root) arc achieving the extreme.
    left, right = st[0], st[1]
    isarc, nsub = st[4], st[5]
    cost, mn, mx = st[8], st[9], st[10]
    if want_max:
        m = mx[root, ch]
    else:
        m = mn[root, ch]
    x = root
    while True:
        _push(st, x)
        l = left[x]
        go_left = False
        if l != NULL and nsub[l] > 0:
            if want_max:
                go_left = mx[l, ch] == m
            else:
                go_left = mn[l, ch] == m
        if go_left:
            x = l
        elif isarc[x] and cost[x, ch] == m:
            return x
        else:
            x = right[x]


@njit(cache=True)
def k_extreme_path(st, v, ch, want_max):
    # Vertex closest to the represented root whose arc-to-parent cost is
    # minimal (or maximal) on the path v..root. -1 when v is the root.
    nsub = st[5]
    _expose(st, v)
    if nsub[v] == 0:
        return NULL
    a = _extreme_arc(st, v, ch, want_max)
    return _succ(st, a)


@njit(cache=True)
def _search_le_arc(st, root, ch, a):
    # Leftmost arc with cost <= a, assuming in-order costs decrease
    # left-to-right (i.e. increase from the exposed node toward the root).
    left, right = st[0], st[1]
    isarc, nsub = st[4], st[5]
    cost, mn = st[8], st[9]
    if nsub[root] == 0 or mn[root, ch] > a:
        return NULL
    x = root
    while True:
        _push(st, x)
        l = left[x]
        if l != NULL and nsub[l] > 0 and mn[l, ch] <= a:
            x = l
        elif isarc[x] and cost[x, ch] <= a:
            _splay(st, x)
            return x
        else:
            x = right[x]


@njit(cache=True)
def k_search_path(st, v, ch, a):
    # Search on the path v..root under strictly increasing costs.
    # Returns (code, node): code 2 = v is a root (error), 1 = no arc with
    # cost <= a (node = represented root), 0 = node is the matching vertex.
    nsub = st[5]
    _expose(st, v)
    if nsub[v] == 0:
        return 2, NULL
    arc = _search_le_arc(st, v, ch, a)
    if arc == NULL:
        r = _leftmost(st, v)
        _splay(st, r)
        return 1, r
    return 0, _succ(st, arc)


@njit(cache=True)
def k_rank_root(st, arc, ch):
    # (represented root, resolved cost[arc, ch]) in one pass; the root is
    # what membership checks compare against.
    cost = st[8]
    _expose(st, arc)
    r = _leftmost(st, arc)
    _splay(st, r)
    return r, cost[arc, ch]


@njit(cache=True)
def k_get_cost(st, arc, ch):
    cost = st[8]
    _splay(st, arc)
    return cost[arc, ch]


@njit(cache=True)
def k_adjacent_arc(st, head, arc, toward_tail):
    # Arc of the neighboring element (list kernels assume standard form:
    # the tail+ vertex is the represented root). -1 at the boundary.
    _expose(st, head)
    if toward_tail:
        u = _pred(st, arc)
        if u == NULL:
            return NULL
        return _pred(st, u)
    u = _succ(st, arc)
    if u == NULL:
        return NULL
    return _succ(st, u)


@njit(cache=True)
def k_rank_of(st, arc, ch):
    # Resolved cost only; cheaper than k_rank_root when membership is known.
    cost = st[8]
    _splay(st, arc)
    return cost[arc, ch]


@njit(cache=True)
def k_select(st, root, ch, a):
    # Leftmost arc with cost <= a under the splay root the caller tracked;
    # valid while the whole list is one splay tree (no splices since the
    # last expose). The found arc is splayed and becomes the new root.
    return _search_le_arc(st, root, ch, a)


@njit(cache=True)
def k_expose_node(st, x):
    _expose(st, x)


@njit(cache=True)
def _seg_expose(st, tailplus, fa, la):
    # Expose exactly the arcs fa..la (in list order); assumes standard form
    # on entry and leaves the tree rooted at the vertex just past la.
    _expose(st, la)
    z = _pred(st, la)
    _devert(st, z)
    u = _far_endpoint(st, fa)
    _expose(st, u)
    return u


@njit(cache=True)
def k_seg_add(st, tailplus, fa, la, ch, a):
    nsub, mn, mx = st[5], st[9], st[10]
    u = _seg_expose(st, tailplus, fa, la)
    bad = 0
    if nsub[u] > 0:
        if mn[u, ch] + a < -COST_LIMIT or mn[u, ch] + a > COST_LIMIT:
            bad = 1
        elif mx[u, ch] + a < -COST_LIMIT or mx[u, ch] + a > COST_LIMIT:
            bad = 1
        else:
            _apply_add(st, u, ch, a)
    _devert(st, tailplus)
    return bad


@njit(cache=True)
def k_seg_negate(st, tailplus, fa, la, ch):
    nsub = st[5]
    u = _seg_expose(st, tailplus, fa, la)
    if nsub[u] > 0:
        _apply_neg(st, u, ch)
    _devert(st, tailplus)


@njit(cache=True)
def k_seg_extreme(st, tailplus, fa, la, ch, want_max):
    u = _seg_expose(st, tailplus, fa, la)
    arc = _extreme_arc(st, u, ch, want_max)
    _splay(st, arc)
    _devert(st, tailplus)
    return arc


@njit(cache=True)
def k_list_search(st, tailplus, head, ch, a):
    # The arc holding the largest channel value <= a over the whole list,
    # under the sorted-channel contract (standard form assumed).
    _expose(st, head)
    return _search_le_arc(st, head, ch, a)


@njit(cache=True)
def _path_add(st, v, ch, a):
    # Unchecked add on the path v..root (index bookkeeping stays tiny).
    nsub = st[5]
    _expose(st, v)
    if nsub[v] > 0:
        _apply_add(st, v, ch, a)


@njit(cache=True)
def _path_neg(st, v, ch):
    nsub = st[5]
    _expose(st, v)
    if nsub[v] > 0:
        _apply_neg(st, v, ch)


@njit(cache=True)
def k_splice_out(st, tailplus, fa, la, prev_arc, s, idx_ch, n0, m):
    # Extract elements fa..la into a standalone list closed by the fresh
    # vertex s, repair both index channels, and return (z, h1) where z is
    # the vertex that followed la and h1 the extracted list's head vertex.
    ea, eb = st[6], st[7]
    h1 = _far_endpoint(st, fa)
    _expose(st, la)
    z = _pred(st, la)
    _cut_above(st, la)
    if prev_arc != NULL:
        _cut_above(st, prev_arc)
        _attach(st, prev_arc, z)
        if ea[prev_arc] == h1:
            ea[prev_arc] = z
        else:
            eb[prev_arc] = z
    _attach(st, la, s)
    if ea[la] == z:
        ea[la] = s
    else:
        eb[la] = s
    # extracted arcs all lie on the path h1..s; the shrunk list's tail
    # arcs all lie on the path z..tail+
    if n0 != 0:
        _path_add(st, h1, idx_ch, -n0)
    _path_add(st, z, idx_ch, -m)
    return z, h1


@njit(cache=True)
def k_splice_in(st, tailplus, x_arc, l1_tp, h1, bm, idx_ch, n0, n1):
    # Insert the list rooted at l1_tp (head vertex h1, last arc bm) right
    # after the element of x_arc; repairs indices. Returns z, the vertex
    # that followed x_arc.
    ea, eb = st[6], st[7]
    _expose(st, x_arc)
    z = _pred(st, x_arc)
    _cut_above(st, x_arc)
    _cut_above(st, bm)
    _attach(st, x_arc, h1)
    if ea[x_arc] == z:
        ea[x_arc] = h1
    else:
        eb[x_arc] = h1
    _attach(st, bm, z)
    if ea[bm] == l1_tp:
        ea[bm] = z
    else:
        eb[bm] = z
    # the path h1..tail+ covers the inserted block plus the old tail; the
    # path z..tail+ covers the old tail only
    _path_add(st, h1, idx_ch, n0)
    if n1 != n0:
        _path_add(st, z, idx_ch, n1 - n0)
    return z


@njit(cache=True)
def k_splice_prefix(st, tailplus, old_head, l1_tp, bm, idx_ch, n1):
    # Insert the list rooted at l1_tp in front of a list whose current head
    # vertex is old_head.
    ea, eb = st[6], st[7]
    _cut_above(st, bm)
    _attach(st, bm, old_head)
    if ea[bm] == l1_tp:
        ea[bm] = old_head
    else:
        eb[bm] = old_head
    _path_add(st, old_head, idx_ch, n1)


@njit(cache=True)
def k_reverse_seg(st, tailplus, fa, la, idx_ch, n0, n1):
    # Reverse the sublist spanned by arcs fa..la in place and repair the
    # index channel: ranks in the block become -i, then shift by n0+n1+1.
    # Both fixes run twice on the tail so it nets out unchanged.
    ea, eb = st[6], st[7]
    tx = _far_endpoint(st, fa)
    _expose(st, la)
    z = _pred(st, la)
    _cut_above(st, la)
    _cut_above(st, tx)
    _devert(st, fa)
    _attach(st, fa, z)
    if ea[fa] == tx:
        ea[fa] = z
    else:
        eb[fa] = z
    _attach(st, tx, la)
    if ea[la] == z:
        ea[la] = tx
    else:
        eb[la] = tx
    shift = n0 + n1 + 1
    _path_neg(st, tx, idx_ch)
    _path_add(st, tx, idx_ch, shift)
    _path_neg(st, z, idx_ch)
    _path_add(st, z, idx_ch, shift)


@njit(cache=True)
def k_build_chain(st, order):
    # Wire the singleton nodes listed in `order` (in-order sequence, root
    # end first) into one balanced splay tree; returns its root.
    left, right, par = st[0], st[1], st[2]
    m = order.shape[0]
    built = np.empty(m, np.int32)
    nb = 0
    stk_lo = np.empty(96, np.int64)
    stk_hi = np.empty(96, np.int64)
    stk_pa = np.empty(96, np.int64)
    stk_sd = np.empty(96, np.int64)
    stk_lo[0] = 0
    stk_hi[0] = m - 1
    stk_pa[0] = NULL
    stk_sd[0] = 0
    top = 1
    root = NULL
    while top > 0:
        top -= 1
        lo = stk_lo[top]
        hi = stk_hi[top]
        pa = stk_pa[top]
        sd = stk_sd[top]
        if lo > hi:
            continue
        mid = (lo + hi) // 2
        x = order[mid]
        par[x] = pa
        if pa == NULL:
            root = x
        elif sd == 0:
            left[pa] = x
        else:
            right[pa] = x
        built[nb] = x
        nb += 1
        stk_lo[top] = lo
        stk_hi[top] = mid - 1
        stk_pa[top] = x
        stk_sd[top] = 0
        top += 1
        stk_lo[top] = mid + 1
        stk_hi[top] = hi
        stk_pa[top] = x
        stk_sd[top] = 1
        top += 1
    i = nb - 1
    while i >= 0:
        _pull(st, built[i])
        i -= 1
    return root


@njit(cache=True)
def k_snapshot(st, tailplus, head, out):
    # Resolved cost rows of all arcs in list order, O(n) total.
    left, right = st[0], st[1]
    isarc = st[4]
    cost = st[8]
    stack = st[13]
    _expose(st, head)
    nch = cost.shape[1]
    n = out.shape[0]
    top = 0
    cur = head
    k = 0
    while top > 0 or cur != NULL:
        while cur != NULL:
            _push(st, cur)
            stack[top] = cur
            top += 1
            cur = left[cur]
        top -= 1
        cur = stack[top]
        if isarc[cur]:
            row = n - 1 - k
            for ch in range(nch):
                out[row, ch] = cost[cur, ch]
            k += 1
        cur = right[cur]
    return k


@njit(cache=True)
def k_snapshot_ids(st, tailplus, head, out):
    # Arc node ids in list order (stable element handles).
    left, right = st[0], st[1]
    isarc = st[4]
    stack = st[13]
    _expose(st, head)
    n = out.shape[0]
    top = 0
    cur = head
    k = 0
    while top > 0 or cur != NULL:
        while cur != NULL:
            _push(st, cur)
            stack[top] = cur
            top += 1
            cur = left[cur]
        top -= 1
        cur = stack[top]
        if isarc[cur]:
            out[n - 1 - k] = cur
            k += 1
        cur = right[cur]
    return k
