"""Hot loops.

Every kernel has a numba implementation and a numpy / plain-Python one;
``LINERECON_NO_NUMBA=1`` selects the latter everywhere.  The Python
realization search also doubles as the arbitrary-precision path used when
scaled positions do not fit in int64.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

INT64_SAFE = 1 << 61


# --------------------------------------------------------------------------
# realization search


def _realize_loop(f_ord, first_nbr, first_len, chk_ptr, chk_idx, chk_len,
                  node_budget, store, broken, target_a, target_b, g, state):
    """Depth-first search over placements of the vertices in ``f_ord`` order.

    Vertex ``i > 0`` is placed at ``g[first_nbr[i]] +/- first_len[i]`` and must
    match every already-placed neighbour listed in the CSR arrays, and must not
    collide with any placed vertex.  Vertex 1 only takes the aligned choice,
    which picks one representative per reflection class.

    ``nodes`` counts placement attempts plus ``n`` per complete placement.
    Returns ``(count, nodes, status)``; status 1 = search complete,
    0 = node budget hit, 2 = stopped early because the target pair broke.
    """
    n = len(f_ord)
    count = 0
    nodes = 0
    cap = len(store)
    g[0] = f_ord[0]
    if n == 1:
        if cap > 0:
            store[0][0] = g[0]
        return 1, 0, 1
    i = 1
    state[1] = 0
    while i >= 1:
        s = state[i]
        if s == 2 or (i == 1 and s == 1):
            state[i] = 0
            i -= 1
            continue
        if i == 1:
            cand = g[0] + (f_ord[1] - f_ord[0])
            state[1] = 1
        else:
            p = first_nbr[i]
            if s == 0:
                cand = g[p] + first_len[i]
                state[i] = 1
            else:
                cand = g[p] - first_len[i]
                state[i] = 2
        nodes += 1
        if nodes > node_budget:
            return count, nodes, 0
        ok = True
        for k in range(chk_ptr[i], chk_ptr[i + 1]):
            d = cand - g[chk_idx[k]]
            if d < 0:
                d = -d
            if d != chk_len[k]:
                ok = False
                break
        if ok:
            for j in range(i):
                if g[j] == cand:
                    ok = False
                    break
        if not ok:
            continue
        g[i] = cand
        if i < n - 1:
            i += 1
            state[i] = 0
            continue
        # complete placement
        if count < cap:
            row = store[count]
            for j in range(n):
                row[j] = g[j]
        count += 1
        # the pair sweep below costs O(n^2); charge it against the budget
        nodes += n
        hit = False
        for a in range(n):
            ga = g[a]
            fa = f_ord[a]
            for b in range(a + 1, n):
                dg = ga - g[b]
                df = fa - f_ord[b]
                if dg < 0:
                    dg = -dg
                if df < 0:
                    df = -df
                if dg != df:
                    broken[a][b] = True
                    broken[b][a] = True
                    if a == target_a and b == target_b:
                        hit = True
        if hit:
            return count, nodes, 2
    return count, nodes, 1


_realize_numba = njit(_realize_loop) if USE_NUMBA else None


def realize(f_ord, first_nbr, first_len, chk_ptr, chk_idx, chk_len,
            node_budget, store_cap, target=(-1, -1), force_python=False):
    """Run the placement search.

    ``f_ord`` holds integer positions in placement order.  Returns
    ``(rows, count, nodes, status, broken)`` where ``rows`` is a list of at most
    ``store_cap`` placements (Python ints, placement order) and ``broken`` an
    ``n x n`` bool array over placement indices.
    """
    n = len(f_ord)
    ta, tb = sorted(target) if target[0] >= 0 else (-1, -1)
    f_list = [int(x) for x in f_ord]
    span = max(abs(x) for x in f_list) if f_list else 0
    total = sum(int(x) for x in first_len) + sum(int(x) for x in chk_len)
    fits = span + total < INT64_SAFE
    if USE_NUMBA and fits and not force_python:
        store = np.zeros((store_cap, max(n, 1)), dtype=np.int64)
        broken = np.zeros((n, n), dtype=np.bool_)
        g = np.zeros(n, dtype=np.int64)
        state = np.zeros(n, dtype=np.int64)
        count, nodes, status = _realize_numba(
            np.asarray(f_list, dtype=np.int64), np.asarray(first_nbr, dtype=np.int64),
            np.asarray([int(x) for x in first_len], dtype=np.int64),
            np.asarray(chk_ptr, dtype=np.int64), np.asarray(chk_idx, dtype=np.int64),
            np.asarray([int(x) for x in chk_len], dtype=np.int64),
            int(node_budget), store, broken, ta, tb, g, state)
        rows = [[int(x) for x in store[r, :n]] for r in range(min(count, store_cap))]
        return rows, int(count), int(nodes), int(status), broken
    store = [[0] * n for _ in range(store_cap)]
    broken_l = [[False] * n for _ in range(n)]
    g = [0] * n
    state = [0] * n
    count, nodes, status = _realize_loop(
        f_list, list(first_nbr), [int(x) for x in first_len], list(chk_ptr), list(chk_idx),
        [int(x) for x in chk_len], int(node_budget), store, broken_l, ta, tb, g, state)
    rows = store[:min(count, store_cap)]
    return rows, count, nodes, status, np.array(broken_l, dtype=bool).reshape(n, n)


# --------------------------------------------------------------------------
# subset enumeration (expansion, pruning, neighbourhood conditions)


@njit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit
def _ctz(x):
    c = 0
    while (x & 1) == 0:
        x >>= 1
        c += 1
    return c


@njit
def _min_ratio_numba(nbr, deg, weight, limit):
    """Gray-code sweep over nonempty S with |S| <= limit, minimising
    cut(S) / weight(S).  Sets with zero weight count as ratio 0.
    Returns (best_cut, best_weight, best_mask)."""
    n = len(nbr)
    S = 0
    size = 0
    cut = 0
    wsum = 0
    best_c = 1
    best_w = 0
    best_mask = 0
    total = 1 << n
    for i in range(1, total):
        v = _ctz(i)
        bit = 1 << v
        if S & bit:
            S ^= bit
            size -= 1
            cut -= deg[v] - 2 * _popcount(nbr[v] & S)
            wsum -= weight[v]
        else:
            cut += deg[v] - 2 * _popcount(nbr[v] & S)
            S |= bit
            size += 1
            wsum += weight[v]
        if size == 0 or size > limit:
            continue
        if wsum == 0:
            c, w = 0, 1
        else:
            c, w = cut, wsum
        if best_w == 0 or c * best_w < best_c * w:
            best_c = c
            best_w = w
            best_mask = S
    return best_c, best_w, best_mask


def _mask_bits(masks, n):
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1).astype(np.int64)


def _min_ratio_numpy(nbr, deg, weight, limit, edges):
    n = len(nbr)
    best = None
    chunk = 1 << 15
    total = 1 << n
    eu = edges[:, 0] if len(edges) else np.zeros(0, dtype=np.int64)
    ev = edges[:, 1] if len(edges) else np.zeros(0, dtype=np.int64)
    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = _mask_bits(masks, n)
        size = bits.sum(axis=1)
        keep = size <= limit
        if not keep.any():
            continue
        masks, bits = masks[keep], bits[keep]
        dsum = bits @ deg
        wsum = bits @ weight
        inside = (bits[:, eu] & bits[:, ev]).sum(axis=1) if len(eu) else np.zeros(len(masks), dtype=np.int64)
        cut = dsum - 2 * inside
        c = np.where(wsum == 0, 0, cut)
        w = np.where(wsum == 0, 1, wsum)
        ratio = c / w
        # exact tie handling: collect candidates near the float minimum
        lo = ratio.min()
        cand = np.nonzero(ratio <= lo + 1e-9)[0]
        for idx in cand:
            ci, wi, mi = int(c[idx]), int(w[idx]), int(masks[idx])
            if best is None or ci * best[1] < best[0] * wi:
                best = (ci, wi, mi)
    if best is None:
        return 1, 0, 0
    return best


def min_ratio_set(nbr_masks, degrees, weights, limit, edges):
    """Minimum of ``cut(S)/weight(S)`` over nonempty ``S`` with ``|S| <= limit``.

    ``cut`` is measured with ``degrees``/``nbr_masks`` (the current graph) while
    ``weights`` supplies the denominator, so the same routine serves plain
    expansion and the pruning rule.  Returns ``(cut, weight, mask)``.
    """
    nbr = np.asarray(nbr_masks, dtype=np.int64)
    deg = np.asarray(degrees, dtype=np.int64)
    w = np.asarray(weights, dtype=np.int64)
    if USE_NUMBA:
        c, wt, mask = _min_ratio_numba(nbr, deg, w, int(limit))
        return int(c), int(wt), int(mask)
    return _min_ratio_numpy(nbr, deg, w, int(limit), np.asarray(edges, dtype=np.int64).reshape(-1, 2))


@njit
def _first_sparse_cut_numba(nbr, deg, weight, limit, num, den):
    """First S (Gray order) with den*cut(S) < num*weight(S), |S| <= limit."""
    n = len(nbr)
    S = 0
    size = 0
    cut = 0
    wsum = 0
    total = 1 << n
    for i in range(1, total):
        v = _ctz(i)
        bit = 1 << v
        if S & bit:
            S ^= bit
            size -= 1
            cut -= deg[v] - 2 * _popcount(nbr[v] & S)
            wsum -= weight[v]
        else:
            cut += deg[v] - 2 * _popcount(nbr[v] & S)
            S |= bit
            size += 1
            wsum += weight[v]
        if size == 0 or size > limit:
            continue
        if den * cut < num * wsum:
            return S
    return 0


def _first_sparse_cut_numpy(nbr, deg, weight, limit, num, den, edges):
    n = len(nbr)
    total = 1 << n
    # Gray-code order so both backends report the same set
    order = np.arange(1, total, dtype=np.int64)
    order = order ^ (order >> 1)
    eu, ev = (edges[:, 0], edges[:, 1]) if len(edges) else (None, None)
    chunk = 1 << 15
    for start in range(0, len(order), chunk):
        masks = order[start:start + chunk]
        bits = _mask_bits(masks, n)
        size = bits.sum(axis=1)
        inside = (bits[:, eu] & bits[:, ev]).sum(axis=1) if eu is not None else 0
        cut = bits @ deg - 2 * inside
        wsum = bits @ weight
        hit = (size >= 1) & (size <= limit) & (den * cut < num * wsum)
        idx = np.nonzero(hit)[0]
        if len(idx):
            return int(masks[idx[0]])
    return 0


def first_sparse_cut(nbr_masks, degrees, weights, limit, num, den, edges):
    nbr = np.asarray(nbr_masks, dtype=np.int64)
    deg = np.asarray(degrees, dtype=np.int64)
    w = np.asarray(weights, dtype=np.int64)
    if USE_NUMBA:
        return int(_first_sparse_cut_numba(nbr, deg, w, int(limit), int(num), int(den)))
    return _first_sparse_cut_numpy(nbr, deg, w, int(limit), int(num), int(den),
                                   np.asarray(edges, dtype=np.int64).reshape(-1, 2))


@njit
def _small_boundary_numba(nbr, required, limit, threshold):
    """First S with |S| <= limit, S & required != 0 and |N(S) \\ S| < threshold."""
    n = len(nbr)
    total = 1 << n
    for S in range(1, total):
        if (S & required) == 0:
            continue
        if _popcount(S) > limit:
            continue
        acc = 0
        x = S
        while x:
            v = _ctz(x)
            acc |= nbr[v]
            x &= x - 1
        if _popcount(acc & ~S) < threshold:
            return S
    return 0


def _small_boundary_numpy(nbr, required, limit, threshold):
    n = len(nbr)
    total = 1 << n
    chunk = 1 << 15
    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = _mask_bits(masks, n)
        ok = ((masks & required) != 0) & (bits.sum(axis=1) <= limit)
        acc = np.zeros(len(masks), dtype=np.int64)
        for v in range(n):
            acc |= np.where(bits[:, v] == 1, nbr[v], 0)
        outside = _mask_bits(acc & ~masks, n).sum(axis=1)
        idx = np.nonzero(ok & (outside < threshold))[0]
        if len(idx):
            return int(masks[idx[0]])
    return 0


def small_boundary_set(nbr_masks, required_mask, limit, threshold):
    nbr = np.asarray(nbr_masks, dtype=np.int64)
    if USE_NUMBA:
        return int(_small_boundary_numba(nbr, int(required_mask), int(limit), int(threshold)))
    return _small_boundary_numpy(nbr, int(required_mask), int(limit), int(threshold))


# --------------------------------------------------------------------------
# NAC-colouring search with the component-intersection condition


def _nac_loop(eu, ev, n, node_budget, red_of, blue_of, colour, hist_r, hist_b):
    """Backtracking over edge colours (1 = red, 2 = blue) in the given order.

    Maintains the red and blue component of each vertex as a bitmask indexed by
    a representative.  A colouring is kept only while no two distinct vertices
    share both a red and a blue component; that condition is equivalent to
    "NAC and |R_i & B_j| <= 1".  The first edge is fixed red.

    Returns ``(status, nodes)``: status 1 = certificate in ``colour``,
    0 = exhausted without one, -1 = node budget hit.
    """
    m = len(eu)
    nodes = 0
    if m == 0:
        return 0, 0
    # red_of[v] / blue_of[v]: bitmask of v's component (kept for every vertex)
    for v in range(n):
        red_of[v] = 1 << v
        blue_of[v] = 1 << v
    k = 0
    colour[0] = 0
    while k >= 0:
        c = colour[k]
        if c != 0:
            # undo previous choice at depth k
            for v in range(n):
                red_of[v] = hist_r[k * n + v]
                blue_of[v] = hist_b[k * n + v]
        if c == 2 or (k == 0 and c == 1):
            colour[k] = 0
            k -= 1
            continue
        c += 1
        colour[k] = c
        nodes += 1
        if nodes > node_budget:
            return -1, nodes
        for v in range(n):
            hist_r[k * n + v] = red_of[v]
            hist_b[k * n + v] = blue_of[v]
        u = eu[k]
        w = ev[k]
        if c == 1:
            ma = red_of[u]
            mb = red_of[w]
        else:
            ma = blue_of[u]
            mb = blue_of[w]
        ok = True
        if ma != mb:
            merged = ma | mb
            # every vertex of the merged component must have a distinct other-colour component
            x = merged
            seen = 0
            while x:
                t = x & (-x)
                v = 0
                while (t >> v) != 1:
                    v += 1
                other = blue_of[v] if c == 1 else red_of[v]
                if seen & other:
                    ok = False
                    break
                seen |= other
                x &= x - 1
            if ok:
                x = merged
                while x:
                    t = x & (-x)
                    v = 0
                    while (t >> v) != 1:
                        v += 1
                    if c == 1:
                        red_of[v] = merged
                    else:
                        blue_of[v] = merged
                    x &= x - 1
        if not ok:
            continue
        if k == m - 1:
            has_blue = False
            for j in range(m):
                if colour[j] == 2:
                    has_blue = True
                    break
            if has_blue:
                return 1, nodes
            continue
        k += 1
        colour[k] = 0
    return 0, nodes


_nac_numba = njit(_nac_loop) if USE_NUMBA else None


def nac_search(order_edges, n, node_budget):
    """Search for a certificate colouring.  ``order_edges`` is the list of
    ``(u, v)`` in branching order.  Returns ``(status, nodes, colours)`` with
    colours aligned to ``order_edges`` (1 red, 2 blue)."""
    m = len(order_edges)
    eu = [e[0] for e in order_edges]
    ev = [e[1] for e in order_edges]
    if USE_NUMBA and n <= 62:
        colour = np.zeros(max(m, 1), dtype=np.int64)
        status, nodes = _nac_numba(
            np.asarray(eu, dtype=np.int64), np.asarray(ev, dtype=np.int64), n, int(node_budget),
            np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64), colour,
            np.zeros(max(m, 1) * n, dtype=np.int64), np.zeros(max(m, 1) * n, dtype=np.int64))
        return int(status), int(nodes), [int(c) for c in colour[:m]]
    colour = [0] * max(m, 1)
    status, nodes = _nac_loop(eu, ev, n, int(node_budget), [0] * n, [0] * n, colour,
                              [0] * (max(m, 1) * n), [0] * (max(m, 1) * n))
    return status, nodes, colour[:m]


# --------------------------------------------------------------------------
# hypercube difference-class check


@njit
def _hypercube_classes_numba(k):
    """Enumerate digit-difference vectors d in {-1,0,1}^k with at least two
    nonzero entries; j = lowest nonzero index.  Returns the index (base-3
    odometer value) of the first vector violating either inequality, or -1,
    together with the number of vectors checked.  F = sum d_i 3^i and the
    nonzero count are updated incrementally."""
    pw = np.empty(k, dtype=np.int64)
    p = 1
    for i in range(k):
        pw[i] = p
        p *= 3
    d = np.full(k, -1, dtype=np.int64)
    F = -(p - 1) // 2
    nz = k
    checked = 0
    for idx in range(p):
        if idx > 0:
            i = 0
            while d[i] == 1:
                d[i] = -1
                F -= 2 * pw[i]
                i += 1
            if d[i] == 0:
                nz += 1
            d[i] += 1
            F += pw[i]
            if d[i] == 0:
                nz -= 1
        if nz < 2:
            continue
        j = 0
        while d[j] == 0:
            j += 1
        checked += 1
        Fj = F - 2 * d[j] * pw[j]
        if Fj == F or Fj == -F:
            return idx, checked
    return -1, checked


def _hypercube_classes_python(k):
    import itertools
    pw = [3 ** i for i in range(k)]
    checked = 0
    for idx, d in enumerate(itertools.product((-1, 0, 1), repeat=k)):
        d = d[::-1]
        nzs = [i for i in range(k) if d[i]]
        if len(nzs) < 2:
            continue
        checked += 1
        j = nzs[0]
        F = sum(d[i] * pw[i] for i in range(k))
        Fj = F - 2 * d[j] * pw[j]
        if Fj in (F, -F):
            return idx, checked
    return -1, checked


def hypercube_classes(k):
    if USE_NUMBA:
        bad, checked = _hypercube_classes_numba(k)
        return int(bad), int(checked)
    return _hypercube_classes_python(k)
