"""Hot loops over the subset lattice.

Ranks are stored as a dense table indexed by bitmask (``table[mask]``), flats as
ascending int64 mask arrays.  Each kernel has a numba path and a fallback; the
fallback is vectorized numpy where the computation has a natural
zeta-transform form, and the same source run by the interpreter otherwise.
Public entry points take ``backend=None | "numba" | "numpy"``.
"""

import numpy as np

from ._jit import njit, resolve_backend

RANK_DTYPE = np.int16


# ---------------------------------------------------------------------------
# subset-lattice transforms (numpy)

def popcounts(n):
    return np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(RANK_DTYPE)


def or_table(n, per_element):
    """``out[mask]`` = OR of ``per_element[e]`` over the bits of mask."""
    out = np.zeros(1 << n, dtype=np.int64)
    for e in range(n):
        out[1 << e: 2 << e] = out[: 1 << e] | np.int64(per_element[e])
    return out


def _pairs(arr, e):
    # view indexed [high bits, bit e, low bits]
    return arr.reshape(-1, 2, 1 << e)


def subset_all(flags, n):
    """In place: ``flags[m]`` becomes AND of flags over all submasks of m."""
    for e in range(n):
        v = _pairs(flags, e)
        v[:, 1, :] &= v[:, 0, :]
    return flags


def subset_max(values, n):
    for e in range(n):
        v = _pairs(values, e)
        np.maximum(v[:, 1, :], v[:, 0, :], out=v[:, 1, :])
    return values


def superset_min(values, n):
    for e in range(n):
        v = _pairs(values, e)
        np.minimum(v[:, 0, :], v[:, 1, :], out=v[:, 0, :])
    return values


def rank_from_independence(independent, n):
    """Rank = size of the largest independent submask."""
    pc = popcounts(n)
    rank = np.where(independent, pc, 0).astype(RANK_DTYPE)
    return subset_max(rank, n)


# ---------------------------------------------------------------------------
# shared numba helpers

@njit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit
def _find(sorted_masks, x):
    lo = 0
    hi = sorted_masks.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if sorted_masks[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# transversal rank table

@njit
def _augment_matching(e, adj, k, set_owner, elem_set, parent, seen, queue):
    for j in range(k):
        parent[j] = -1
        seen[j] = False
    head = 0
    tail = 1
    queue[0] = e
    while head < tail:
        u = queue[head]
        head += 1
        bits = adj[u]
        for j in range(k):
            if not (bits >> j) & 1 or seen[j]:
                continue
            seen[j] = True
            parent[j] = u
            if set_owner[j] == -1:
                while True:
                    u2 = parent[j]
                    prev = elem_set[u2]
                    set_owner[j] = u2
                    elem_set[u2] = j
                    if u2 == e:
                        return True
                    j = prev
            queue[tail] = set_owner[j]
            tail += 1
    return False


@njit
def _transversal_table_nb(n, k, adj):
    out = np.zeros(1 << n, dtype=np.int16)
    owner = -np.ones((n + 1, max(k, 1)), dtype=np.int64)
    esets = -np.ones((n + 1, max(n, 1)), dtype=np.int64)
    parent = np.empty(max(k, 1), dtype=np.int64)
    seen = np.zeros(max(k, 1), dtype=np.bool_)
    queue = np.empty(n + k + 1, dtype=np.int64)
    masks = np.zeros(n + 1, dtype=np.int64)
    nxt = np.zeros(n + 1, dtype=np.int64)
    d = 0
    # depth-first over subsets in lexicographic order; level d+1 extends the
    # maximum matching of level d by one augmenting search
    while d >= 0:
        e = nxt[d]
        if e >= n:
            d -= 1
            continue
        nxt[d] = e + 1
        owner[d + 1, :] = owner[d, :]
        esets[d + 1, :] = esets[d, :]
        grew = _augment_matching(e, adj, k, owner[d + 1], esets[d + 1], parent, seen, queue)
        m = masks[d] | (np.int64(1) << e)
        out[m] = out[masks[d]] + (1 if grew else 0)
        masks[d + 1] = m
        nxt[d + 1] = e + 1
        d += 1
    return out


def _transversal_table_np(n, adj):
    neighbours = or_table(n, adj)
    pc = popcounts(n)
    hall = np.bitwise_count(neighbours) >= pc
    return rank_from_independence(subset_all(hall, n), n)


def transversal_table(n, set_masks, backend=None):
    """Rank table of the transversal matroid of a set system.

    ``set_masks[j]`` is the element bitmask of the j-th set.  The numba path
    grows maximum matchings by augmenting paths; the numpy path tests Hall's
    condition on every submask.
    """
    k = len(set_masks)
    if k > 62:
        raise ValueError("at most 62 sets are supported")
    adj = np.zeros(max(n, 1), dtype=np.int64)
    for j, s in enumerate(set_masks):
        for e in range(n):
            if (s >> e) & 1:
                adj[e] |= 1 << j
    if resolve_backend(backend) == "numba":
        return _transversal_table_nb(n, k, adj)
    return _transversal_table_np(n, adj[:n])


# ---------------------------------------------------------------------------
# gammoid rank table (vertex-split unit-capacity max flow)

@njit
def _augment_flow(res, src, snk, parent, queue):
    nv = res.shape[0]
    for v in range(nv):
        parent[v] = -1
    parent[src] = src
    head = 0
    tail = 1
    queue[0] = src
    while head < tail:
        u = queue[head]
        head += 1
        for w in range(nv):
            if res[u, w] > 0 and parent[w] == -1:
                parent[w] = u
                if w == snk:
                    v = snk
                    while v != src:
                        p = parent[v]
                        res[p, v] -= 1
                        res[v, p] += 1
                        v = p
                    return True
                queue[tail] = w
                tail += 1
    return False


@njit
def _gammoid_table_kernel(n, nvert, arcs, ground, sinks):
    size = 2 * nvert + 2
    src = 2 * nvert
    snk = src + 1
    base = np.zeros((size, size), dtype=np.int8)
    for v in range(nvert):
        base[2 * v, 2 * v + 1] = 1
        if sinks[v]:
            base[2 * v + 1, snk] = 1
    for t in range(arcs.shape[0]):
        u = arcs[t, 0]
        w = arcs[t, 1]
        if u != w:
            base[2 * u + 1, 2 * w] = 1
    out = np.zeros(1 << n, dtype=np.int16)
    res = np.zeros((n + 1, size, size), dtype=np.int8)
    res[0] = base
    parent = np.empty(size, dtype=np.int64)
    queue = np.empty(size, dtype=np.int64)
    masks = np.zeros(n + 1, dtype=np.int64)
    nxt = np.zeros(n + 1, dtype=np.int64)
    d = 0
    while d >= 0:
        e = nxt[d]
        if e >= n:
            d -= 1
            continue
        nxt[d] = e + 1
        res[d + 1] = res[d]
        res[d + 1, src, 2 * ground[e]] = 1
        grew = _augment_flow(res[d + 1], src, snk, parent, queue)
        m = masks[d] | (np.int64(1) << e)
        out[m] = out[masks[d]] + (1 if grew else 0)
        masks[d + 1] = m
        nxt[d + 1] = e + 1
        d += 1
    return out


def gammoid_table(nvert, arcs, ground, sinks, backend=None):
    """Rank table of a gammoid.

    ``arcs`` is an (m, 2) int array of vertex indices, ``ground`` the vertex
    index of each matroid element, ``sinks`` a boolean vertex mask.  The
    fallback runs the same augmenting-path code without compilation.
    """
    arcs = np.asarray(arcs, dtype=np.int64).reshape(-1, 2)
    ground = np.asarray(ground, dtype=np.int64)
    sinks = np.asarray(sinks, dtype=np.bool_)
    fn = _gammoid_table_kernel
    if resolve_backend(backend) == "numpy":
        fn = getattr(fn, "py_func", fn)
    return fn(len(ground), nvert, arcs, ground, sinks)


# ---------------------------------------------------------------------------
# circuits and graphs

@njit
def _circuit_table_nb(n, circuits, pc):
    out = np.zeros(1 << n, dtype=np.int16)
    for m in range(1, 1 << n):
        dependent = False
        for c in circuits:
            if m & c == c:
                dependent = True
                break
        if not dependent:
            out[m] = pc[m]
            continue
        best = 0
        for e in range(n):
            if (m >> e) & 1:
                v = out[m ^ (1 << e)]
                if v > best:
                    best = v
        out[m] = best
    return out


def circuit_table(n, circuits, backend=None):
    """Rank table whose independent sets are the sets containing no circuit."""
    circuits = np.asarray(list(circuits), dtype=np.int64)
    if resolve_backend(backend) == "numba":
        return _circuit_table_nb(n, circuits, popcounts(n))
    masks = np.arange(1 << n, dtype=np.int64)
    dependent = np.zeros(1 << n, dtype=bool)
    for c in circuits:
        dependent |= (masks & c) == c
    return rank_from_independence(~dependent, n)


@njit
def _graphic_table_nb(n, nvert, ends):
    out = np.zeros(1 << n, dtype=np.int16)
    root = np.empty(max(nvert, 1), dtype=np.int64)
    for m in range(1, 1 << n):
        for v in range(nvert):
            root[v] = v
        rank = 0
        for e in range(n):
            if not (m >> e) & 1:
                continue
            a = ends[e, 0]
            while root[a] != a:
                root[a] = root[root[a]]
                a = root[a]
            b = ends[e, 1]
            while root[b] != b:
                root[b] = root[root[b]]
                b = root[b]
            if a != b:
                root[a] = b
                rank += 1
        out[m] = rank
    return out


def graphic_table(n, nvert, ends, backend=None):
    """Cycle-matroid rank table; ``ends`` is an (n, 2) array of edge endpoints.

    The numpy path uses the forest criterion: an edge set is acyclic iff each
    nonempty subset X touches at least |X| + 1 vertices.
    """
    ends = np.asarray(ends, dtype=np.int64).reshape(-1, 2)
    if resolve_backend(backend) == "numba":
        return _graphic_table_nb(n, nvert, ends)
    touched = or_table(n, [(1 << int(a)) | (1 << int(b)) for a, b in ends])
    pc = popcounts(n).astype(np.int64)
    ok = np.bitwise_count(touched) >= pc + 1
    ok[0] = True
    return rank_from_independence(subset_all(ok, n), n)


# ---------------------------------------------------------------------------
# flats, cyclic sets, closure

@njit
def _flag_tables_nb(table, n):
    size = 1 << n
    flat = np.ones(size, dtype=np.bool_)
    cyclic = np.ones(size, dtype=np.bool_)
    for m in range(size):
        rm = table[m]
        for e in range(n):
            b = 1 << e
            if m & b:
                if table[m ^ b] != rm:
                    cyclic[m] = False
            elif table[m | b] == rm:
                flat[m] = False
    return flat, cyclic


def flag_tables(table, n, backend=None):
    """Boolean tables ``(is_flat, is_cyclic)`` over all masks."""
    if resolve_backend(backend) == "numba":
        return _flag_tables_nb(table, n)
    flat = np.ones(1 << n, dtype=bool)
    cyclic = np.ones(1 << n, dtype=bool)
    for e in range(n):
        r = _pairs(table, e)
        same = r[:, 1, :] == r[:, 0, :]
        _pairs(flat, e)[:, 0, :] &= ~same
        _pairs(cyclic, e)[:, 1, :] &= same
    return flat, cyclic


def closure_table(table, n):
    cl = np.arange(1 << n, dtype=np.int64)
    for e in range(n):
        r = _pairs(table, e)
        view = _pairs(cl, e)
        view[:, 0, :] |= np.where(r[:, 1, :] == r[:, 0, :], np.int64(1 << e), 0)
    return cl


# ---------------------------------------------------------------------------
# axioms: R1 globally, R2 and R3 in their local (single-element) forms

@njit
def _axioms_nb(table, n, pc):
    size = 1 << n
    for m in range(size):
        if table[m] < 0 or table[m] > pc[m]:
            return 1, m, m
    for m in range(size):
        for e in range(n):
            b = 1 << e
            if not m & b and table[m] > table[m | b]:
                return 2, m, m | b
    for m in range(size):
        for e in range(n):
            be = 1 << e
            if m & be:
                continue
            for f in range(e + 1, n):
                bf = 1 << f
                if m & bf:
                    continue
                if table[m | be] + table[m | bf] < table[m | be | bf] + table[m]:
                    return 3, m | be, m | bf
    return 0, -1, -1


def _axioms_np(table, n, pc):
    masks = np.arange(1 << n, dtype=np.int64)
    t = table.astype(np.int64)
    bad = np.flatnonzero((t < 0) | (t > pc))
    if bad.size:
        m = int(bad[0])
        return 1, m, m
    best = None
    for e in range(n):
        base = masks[(masks >> e) & 1 == 0]
        hit = np.flatnonzero(t[base] > t[base | (1 << e)])
        if hit.size:
            cand = (int(base[hit[0]]), e)
            best = cand if best is None or cand < best else best
    if best is not None:
        m, e = best
        return 2, m, m | (1 << e)
    for e in range(n):
        for f in range(e + 1, n):
            be, bf = 1 << e, 1 << f
            base = masks[(masks & (be | bf)) == 0]
            hit = np.flatnonzero(t[base | be] + t[base | bf] < t[base | be | bf] + t[base])
            if hit.size:
                cand = (int(base[hit[0]]), e, f)
                best = cand if best is None or cand < best else best
    if best is not None:
        m, e, f = best
        return 3, m | (1 << e), m | (1 << f)
    return 0, -1, -1


def check_axioms_local(table, n, backend=None):
    """Return ``(code, a, b)``: code 0 = valid, 1/2/3 = first failing axiom.

    Order is R1, then R2, then R3; within an axiom the witness with the
    smallest base mask (then smallest element indices) is reported.
    """
    pc = popcounts(n)
    if resolve_backend(backend) == "numba":
        code, a, b = _axioms_nb(table, n, pc)
    else:
        code, a, b = _axioms_np(table, n, pc)
    return int(code), int(a), int(b)


# ---------------------------------------------------------------------------
# flat-lattice scans

@njit
def _down_sets_nb(flats):
    nf = flats.shape[0]
    counts = np.zeros(nf + 1, dtype=np.int64)
    for bi in range(nf):
        b = flats[bi]
        c = 0
        for xi in range(bi + 1):
            if flats[xi] & ~b == 0:
                c += 1
        counts[bi + 1] = counts[bi] + c
    idx = np.empty(counts[nf], dtype=np.int64)
    for bi in range(nf):
        b = flats[bi]
        t = counts[bi]
        for xi in range(bi + 1):
            if flats[xi] & ~b == 0:
                idx[t] = xi
                t += 1
    return counts, idx


def down_sets(flats, backend=None):
    """CSR lists of the flats below each flat (subsets have smaller masks)."""
    if resolve_backend(backend) == "numba":
        return _down_sets_nb(flats)
    ptr = [0]
    parts = []
    for bi, b in enumerate(flats):
        head = flats[: bi + 1]
        sub = np.flatnonzero(head & ~b == 0)
        parts.append(sub)
        ptr.append(ptr[-1] + sub.size)
    idx = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    return np.asarray(ptr, dtype=np.int64), idx.astype(np.int64)


@njit
def _pseudo_scan_nb(table, flats, ptr, idx):
    nf = flats.shape[0]
    for ai in range(nf):
        a = flats[ai]
        for bi in range(nf):
            b = flats[bi]
            target = table[a | b] - table[b]
            b0 = b
            for t in range(ptr[bi], ptr[bi + 1]):
                x = flats[idx[t]]
                if table[a | x] - table[x] == target:
                    b0 &= x
            if table[a | b0] - table[b0] != target:
                return ai, bi
    return -1, -1


def _pseudo_scan_np(table, flats, ptr, idx):
    best = (-1, -1)
    t = table.astype(np.int64)
    for bi, b in enumerate(flats):
        down = flats[idx[ptr[bi]: ptr[bi + 1]]]
        target = t[flats | b] - t[b]
        contr = t[flats[:, None] | down[None, :]] - t[down][None, :]
        in_t = contr == target[:, None]
        b0 = np.bitwise_and.reduce(np.where(in_t, down[None, :], np.int64(-1)), axis=1)
        bad = np.flatnonzero(t[flats | b0] - t[b0] != target)
        if bad.size and (best[0] < 0 or int(bad[0]) < best[0]):
            best = (int(bad[0]), bi)
    return best


def pseudomodular_scan(table, flats, backend=None):
    """First ordered flat pair (A, B), A outer, for which no pseudointersection
    exists, as flat indices; ``(-1, -1)`` if none."""
    backend = resolve_backend(backend)
    ptr, idx = down_sets(flats, backend)
    if backend == "numba":
        ai, bi = _pseudo_scan_nb(table, flats, ptr, idx)
    else:
        ai, bi = _pseudo_scan_np(table, flats, ptr, idx)
    return int(ai), int(bi)


@njit
def _triple_scan_nb(table, flats):
    nf = flats.shape[0]
    v = np.empty(nf, dtype=np.int64)
    for ai in range(nf):
        a = flats[ai]
        for bi in range(nf):
            v[bi] = table[a | flats[bi]] - table[flats[bi]]
        for bi in range(nf):
            b = flats[bi]
            vb = v[bi]
            for ci in range(bi + 1, nf):
                if v[ci] != vb:
                    continue
                c = flats[ci]
                u = b | c
                if table[a | u] - table[u] != vb:
                    continue
                i = b & c
                if table[a | i] - table[i] != vb:
                    return ai, bi, ci
    return -1, -1, -1


def _triple_scan_np(table, flats):
    t = table.astype(np.int64)
    nf = flats.shape[0]
    union = flats[:, None] | flats[None, :]
    inter = flats[:, None] & flats[None, :]
    r_union = t[union]
    r_inter = t[inter]
    upper = np.triu(np.ones((nf, nf), dtype=bool), 1)
    for ai, a in enumerate(flats):
        v = t[a | flats] - t[flats]
        hyp = upper & (v[:, None] == v[None, :]) & (t[a | union] - r_union == v[:, None])
        bad = hyp & (t[a | inter] - r_inter != v[:, None])
        hit = np.argwhere(bad)
        if hit.size:
            return ai, int(hit[0, 0]), int(hit[0, 1])
    return -1, -1, -1


def triple_form_scan(table, flats, backend=None):
    """First flat triple (A, B, C), B < C, with r(A/B)=r(A/C)=r(A/B∪C) but
    r(A/B∩C) different; ``(-1, -1, -1)`` if none."""
    if resolve_backend(backend) == "numba":
        ai, bi, ci = _triple_scan_nb(table, flats)
    else:
        ai, bi, ci = _triple_scan_np(table, flats)
    return int(ai), int(bi), int(ci)


@njit
def _modular_scan_nb(table, flats):
    nf = flats.shape[0]
    for ai in range(nf):
        a = flats[ai]
        for bi in range(ai + 1, nf):
            b = flats[bi]
            if table[a] + table[b] != table[a | b] + table[a & b]:
                return ai, bi
    return -1, -1


def modular_scan(table, flats, backend=None):
    if resolve_backend(backend) == "numba":
        ai, bi = _modular_scan_nb(table, flats)
        return int(ai), int(bi)
    t = table.astype(np.int64)
    for ai, a in enumerate(flats):
        rest = flats[ai + 1:]
        bad = np.flatnonzero(t[a] + t[rest] != t[a | rest] + t[a & rest])
        if bad.size:
            return ai, ai + 1 + int(bad[0])
    return -1, -1


# ---------------------------------------------------------------------------
# Δ search over antichains of cyclic flats

@njit
def _bump(coef, nzi, nzn, listed, lvl, i, val):
    if not listed[lvl, i]:
        listed[lvl, i] = True
        nzi[lvl, nzn[lvl]] = i
        nzn[lvl] += 1
    coef[lvl, i] += val


@njit
def _antichain_level_kernel(table, flats, cyc, comparable, k, budget):
    # The signed multiset of intersections of the chosen members is kept as
    # integer coefficients on flat indices, so one level costs O(#distinct
    # intersections) instead of 2^depth.
    nc = cyc.shape[0]
    nf = flats.shape[0]
    coef = np.zeros((k + 1, nf), dtype=np.int64)
    listed = np.zeros((k + 1, nf), dtype=np.bool_)
    nzi = np.zeros((k + 1, nf), dtype=np.int64)
    nzn = np.zeros(k + 1, dtype=np.int64)
    union = np.zeros(k + 1, dtype=np.int64)
    chosen = np.zeros(k, dtype=np.int64)
    nxt = np.zeros(k + 1, dtype=np.int64)
    nodes = 0
    leaves = 0
    d = 0
    while d >= 0:
        j = nxt[d]
        while j < nc:
            ok = True
            for t in range(d):
                if comparable[chosen[t], j]:
                    ok = False
                    break
            if ok:
                break
            j += 1
        if j + (k - d) > nc:
            d -= 1
            continue
        nxt[d] = j + 1
        chosen[d] = j
        nodes += 1
        if nodes > budget:
            return 3, chosen, nodes, leaves
        lvl = d + 1
        for t in range(nzn[lvl]):
            coef[lvl, nzi[lvl, t]] = 0
            listed[lvl, nzi[lvl, t]] = False
        nzn[lvl] = 0
        f = flats[cyc[j]]
        for t in range(nzn[d]):
            i = nzi[d, t]
            _bump(coef, nzi, nzn, listed, lvl, i, coef[d, i])
        for t in range(nzn[d]):
            i = nzi[d, t]
            val = coef[d, i]
            if val != 0:
                g = _find(flats, flats[i] & f)
                _bump(coef, nzi, nzn, listed, lvl, g, -val)
        _bump(coef, nzi, nzn, listed, lvl, cyc[j], -1)
        union[lvl] = union[d] | f
        if lvl == k:
            leaves += 1
            delta = np.int64(table[union[lvl]])
            for t in range(nzn[lvl]):
                i = nzi[lvl, t]
                delta += coef[lvl, i] * table[flats[i]]
            if delta > 0:
                return 1, chosen, nodes, leaves
        else:
            nxt[lvl] = j + 1
            d = lvl
    if leaves == 0:
        return 2, chosen, nodes, leaves
    return 0, chosen, nodes, leaves


def antichain_level(table, flats, cyc, comparable, k, budget, backend=None):
    """Scan antichains of exactly ``k`` cyclic flats in lexicographic order.

    ``cyc`` holds flat indices of the cyclic flats (ascending), ``comparable``
    their pairwise containment relation.  Returns ``(status, chosen, nodes)``
    with status 0 = no positive Δ, 1 = positive Δ at ``chosen`` (positions
    into ``cyc``), 2 = no antichain of size k exists, 3 = budget exhausted.
    """
    fn = _antichain_level_kernel
    if resolve_backend(backend) == "numpy":
        fn = getattr(fn, "py_func", fn)
    status, chosen, nodes, _ = fn(table, flats, cyc, comparable, k, budget)
    return int(status), [int(x) for x in chosen[:k]], int(nodes)
