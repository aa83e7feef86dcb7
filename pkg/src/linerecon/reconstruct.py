"""Exact reconstructibility on the line.

A realization of an embedded graph ``(G, f)`` is an injective ``g`` with
``|g(u) - g(v)| = |f(u) - f(v)|`` on every edge.  On a connected graph it is
fixed by one anchor position plus a sign per edge (aligned / anti-aligned
with ``f``); we enumerate those sign patterns up to a global flip by a
depth-first placement search.  Everything is computed on integer-scaled
positions, so all comparisons are exact.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .graph_core import (EmbeddedGraph, Graph, UnionFind, biconnected_components,
                         components_of, connected_components, cycle_basis, cycle_edges,
                         is_connected)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 1 << 20
STORE_CAP = 4096


class BudgetExceeded(RuntimeError):
    """The realization search stopped before covering every candidate."""


@dataclass(frozen=True)
class SignAssignment:
    """``signs[i]`` is +1 when ``g`` and ``f`` align on ``graph.edges[i]``."""

    signs: tuple

    def flipped(self):
        return SignAssignment(tuple(-s for s in self.signs))

    @property
    def anti_aligned(self):
        return [i for i, s in enumerate(self.signs) if s < 0]


@dataclass(frozen=True)
class AlternativeEmbedding:
    vertices: tuple
    positions: tuple

    def as_dict(self):
        return dict(zip(self.vertices, self.positions))


@dataclass
class RealizationResult:
    """Output of :func:`enumerate_realizations`.

    ``exhausted`` is True when the search covered every candidate; otherwise
    the lists hold what was found before the budget ran out.
    """

    assignments: list
    embeddings: list
    exhausted: bool
    count: int
    nodes: int


@dataclass
class ReconReport:
    reconstructible_pairs: set
    maximal_subsets: list
    exhausted: bool
    unknown_pairs: set = field(default_factory=set)
    route: str = "exact"

    @property
    def largest(self):
        return max((len(s) for s in self.maximal_subsets), default=0)


# --------------------------------------------------------------------------
# placement order


def placement_order(g: Graph, vertices, anchor):
    """Order the vertices of one component for the placement search.

    Ears (paths through unplaced vertices joining two placed vertices, or a
    cycle back to the same one) are added shortest-first, so every cycle
    closes as soon as possible; vertices reachable only through bridges are
    attached one at a time.  Returns ``(order, first)`` where ``first[v]`` is
    the placed neighbour that ``v`` is positioned from.
    """
    inside = set(vertices)
    placed = {anchor}
    order = [anchor]
    first = {anchor: -1}
    while len(placed) < len(inside):
        ear = _shortest_ear(g, inside, placed)
        if ear is None:
            # attach the smallest unplaced vertex next to the placed set
            best = None
            for x in sorted(placed):
                for y in g.adj[x]:
                    if y in inside and y not in placed and (best is None or y < best[0]):
                        best = (y, x)
            y, x = best
            placed.add(y)
            order.append(y)
            first[y] = x
            continue
        for prev, x in zip(ear, ear[1:-1]):
            placed.add(x)
            order.append(x)
            first[x] = prev
    return order, first


def _shortest_ear(g, inside, placed):
    root = {}
    head = {}
    parent = {}
    queue = deque()
    for r in sorted(placed):
        for s in g.adj[r]:
            if s in inside and s not in placed and s not in root:
                root[s], head[s], parent[s] = r, s, r
                queue.append(s)
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if y not in inside:
                continue
            if y in placed:
                if y != root[x] or x != head[x]:
                    return _trace(x, parent, placed) + [y]
                continue
            if y not in root:
                root[y], head[y], parent[y] = root[x], head[x], x
                queue.append(y)
            elif head[y] != head[x]:
                left = _trace(x, parent, placed)
                right = _trace(y, parent, placed)
                return left + right[::-1]
    return None


def _trace(x, parent, placed):
    path = [x]
    while path[-1] not in placed:
        path.append(parent[path[-1]])
    return path[::-1]


class _Search:
    """Precomputed placement arrays for one connected vertex set."""

    def __init__(self, eg: EmbeddedGraph, vertices, anchor=None):
        g = eg.graph
        ints, self.scale = eg.scaled
        vertices = sorted(vertices)
        anchor = vertices[0] if anchor is None else anchor
        self.order, first = placement_order(g, vertices, anchor)
        self.index = {v: i for i, v in enumerate(self.order)}
        self.f_ord = [ints[v] for v in self.order]
        n = len(self.order)
        self.first_nbr = [0] * n
        self.first_len = [0] * n
        ptr, idx, lens = [0], [], []
        for i, v in enumerate(self.order):
            p = first[v]
            if p >= 0:
                self.first_nbr[i] = self.index[p]
                self.first_len[i] = abs(ints[v] - ints[p])
            for w in g.adj[v]:
                j = self.index.get(w)
                if j is not None and j < i and w != p:
                    idx.append(j)
                    lens.append(abs(ints[v] - ints[w]))
            ptr.append(len(idx))
        self.chk_ptr, self.chk_idx, self.chk_len = ptr, idx, lens

    def run(self, budget, store_cap=STORE_CAP, target=None):
        t = (-1, -1)
        if target is not None:
            t = (self.index[target[0]], self.index[target[1]])
        return kernels.realize(self.f_ord, self.first_nbr, self.first_len, self.chk_ptr,
                               self.chk_idx, self.chk_len, budget, store_cap, target=t)


# --------------------------------------------------------------------------
# enumeration and pair verdicts


def enumerate_realizations(eg: EmbeddedGraph, budget=DEFAULT_BUDGET, store_cap=STORE_CAP):
    """All realizations of a connected embedded graph, one per reflection pair.

    The anchor (vertex 0) stays at ``f(0)`` and the first edge placed from it
    is aligned, so the identity realization is always first.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not is_connected(eg.graph):
        raise ValueError("enumerate_realizations needs a connected graph")
    if eg.n == 0:
        return RealizationResult([], [], True, 0, 0)
    search = _Search(eg, range(eg.n))
    rows, count, nodes, status, _ = search.run(budget, store_cap)
    g = eg.graph
    ints, scale = eg.scaled
    assignments, embeddings = [], []
    for row in rows:
        pos = [0] * eg.n
        for i, v in enumerate(search.order):
            pos[v] = row[i]
        signs = tuple(1 if (pos[u] - pos[v]) * (ints[u] - ints[v]) > 0 else -1 for u, v in g.edges)
        assignments.append(SignAssignment(signs))
        embeddings.append(AlternativeEmbedding(tuple(range(eg.n)),
                                               tuple(Fraction(p, scale) for p in pos)))
    order = sorted(range(len(assignments)), key=lambda k: tuple(-s for s in assignments[k].signs))
    return RealizationResult([assignments[k] for k in order], [embeddings[k] for k in order],
                             status == 1 and count <= store_cap, count, nodes)


def embedding_from_signs(eg: EmbeddedGraph, signs: SignAssignment, anchor=0):
    """Propagate positions along a BFS tree; returns None if some edge is
    inconsistent or two vertices collide."""
    g = eg.graph
    f = eg.positions
    pos = {anchor: f[anchor]}
    queue = deque([anchor])
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if y not in pos:
                s = signs.signs[g.edge_index[(min(x, y), max(x, y))]]
                pos[y] = pos[x] + s * (f[y] - f[x])
                queue.append(y)
    for (u, v), s in zip(g.edges, signs.signs):
        if pos[u] - pos[v] != s * (f[u] - f[v]):
            return None
    if len(set(pos.values())) != len(pos):
        return None
    return pos


def _violating_realization(eg, u, v, budget):
    """A realization on the component of u and v breaking |uv|, or None.
    Raises BudgetExceeded if the search could not finish."""
    comp = next(c for c in connected_components(eg.graph) if u in c)
    search = _Search(eg, comp)
    rows, count, nodes, status, broken = search.run(budget, store_cap=1 << 16, target=(u, v))
    iu, iv = search.index[u], search.index[v]
    if status == 2 or broken[iu, iv]:
        ints, scale = eg.scaled
        fu, fv = ints[u], ints[v]
        for row in rows:
            if abs(row[iu] - row[iv]) != abs(fu - fv):
                return {w: Fraction(row[i], scale) for i, w in enumerate(search.order)}
        # the violating placement was not stored: rerun with early exit only
        rows, *_ = _Search(eg, comp).run(budget, store_cap=1 << 16, target=(u, v))
        for row in rows:
            if abs(row[iu] - row[iv]) != abs(fu - fv):
                return {w: Fraction(row[i], scale) for i, w in enumerate(search.order)}
        raise AssertionError("violating realization vanished")
    if status == 0:
        raise BudgetExceeded(f"realization search for pair {(u, v)} hit budget {budget}")
    return None


def is_pair_reconstructible(eg: EmbeddedGraph, u, v, budget=DEFAULT_BUDGET) -> bool:
    """True iff every realization keeps ``|g(u) - g(v)| = |f(u) - f(v)|``.

    Pairs in different components are never reconstructible.  Raises
    :class:`BudgetExceeded` rather than guessing when the search is cut off.
    """
    if u == v:
        raise ValueError("pair must have distinct vertices")
    if eg.graph.has_edge(u, v):
        return True
    comps = connected_components(eg.graph)
    cu = next(i for i, c in enumerate(comps) if u in c)
    if v not in comps[cu]:
        return False
    return _violating_realization(eg, u, v, budget) is None


def pair_matrix_exact(eg: EmbeddedGraph, budget=DEFAULT_BUDGET):
    """``(recon, complete)``: boolean n x n reconstructibility matrix from a
    full enumeration of every component."""
    n = eg.n
    recon = np.zeros((n, n), dtype=bool)
    complete = True
    for comp in connected_components(eg.graph):
        search = _Search(eg, comp)
        _, _, _, status, broken = search.run(budget, store_cap=0)
        complete &= status == 1
        idx = np.array(search.order)
        recon[np.ix_(idx, idx)] = ~broken
    np.fill_diagonal(recon, True)
    return recon, complete


# --------------------------------------------------------------------------
# block route for graphs too large for a global enumeration


def _block_route(eg: EmbeddedGraph, comp, budget):
    """Decide pairs inside one component using its blocks.

    Returns ``(recon, broken)`` boolean matrices over ``comp`` (local
    indices): ``recon`` marks certified reconstructible pairs, ``broken``
    certified non-reconstructible ones.  Anything in neither is unknown.
    """
    g = eg.graph
    ints, _ = eg.scaled
    loc = {v: i for i, v in enumerate(comp)}
    k = len(comp)
    recon = np.zeros((k, k), dtype=bool)
    broken = np.zeros((k, k), dtype=bool)
    np.fill_diagonal(recon, True)
    sub, _ = g.induced(comp)
    f_loc = np.array([ints[v] for v in comp], dtype=object)
    fset = {int(x): i for i, x in enumerate(f_loc)}

    # reflecting everything on one side of a cut vertex
    blocks = biconnected_components(sub)
    cut_count = {}
    for b in blocks:
        for x in b:
            cut_count[x] = cut_count.get(x, 0) + 1
    cuts = [x for x, c in cut_count.items() if c > 1]
    for c in cuts:
        rest = [y for y in range(k) if y != c]
        sides = components_of(k, [(a, b) for a, b in sub.edges if a != c and b != c])
        sides = [s for s in sides if s != [c]]
        fc = int(f_loc[c])
        for side in sides:
            side_set = set(side)
            reflected = {2 * fc - int(f_loc[y]) for y in side}
            clash = any(fset.get(val) is not None and fset[val] not in side_set for val in reflected)
            if clash:
                continue
            others = np.array([y for y in rest if y not in side_set], dtype=int)
            s_arr = np.array(side, dtype=int)
            if len(others):
                broken[np.ix_(s_arr, others)] = True
                broken[np.ix_(others, s_arr)] = True

    # inside each block: its own realizations, then extend to the component
    for b in blocks:
        bverts = [comp[x] for x in b]
        sub_eg, _ = eg.induced(bverts)
        search = _Search(sub_eg, range(len(bverts)))
        rows, count, nodes, status, bbroken = search.run(budget, store_cap=STORE_CAP)
        bidx = np.array([b[i] for i in search.order], dtype=int)
        if status == 1:
            ok = ~bbroken
            recon[np.ix_(bidx, bidx)] |= ok
        if not bbroken.any():
            continue
        attach = _attachments(sub, b)
        for row in rows:
            gpos = _extend(row, search.order, b, attach, f_loc, k)
            if gpos is None:
                continue
            diff_g = np.abs(gpos[:, None] - gpos[None, :])
            diff_f = np.abs(f_loc[:, None] - f_loc[None, :])
            broken |= (diff_g != diff_f).astype(bool)
    recon &= ~broken
    return recon, broken


def _attachments(sub, block):
    """For each vertex outside ``block``: (attachment vertex in block, branch id)."""
    bset = set(block)
    out = {}
    branch = 0
    for c in block:
        for s in sub.adj[c]:
            if s in bset or s in out:
                continue
            queue = deque([s])
            out[s] = (c, branch)
            while queue:
                x = queue.popleft()
                for y in sub.adj[x]:
                    if y not in bset and y not in out:
                        out[y] = (c, branch)
                        queue.append(y)
            branch += 1
    return out


def _extend(row, order, block, attach, f_loc, k):
    """Hang every branch rigidly off its attachment vertex; try a few
    orientation patterns and return the first injective one."""
    gb = {block[i]: int(row[j]) for j, i in enumerate(order)}
    branches = {}
    for x, (c, br) in attach.items():
        branches.setdefault(br, (c, []))[1].append(x)
    keys = sorted(branches)
    patterns = [dict.fromkeys(keys, 1), dict.fromkeys(keys, -1)]
    rng = np.random.default_rng(len(keys))
    for _ in range(6):
        patterns.append({kk: int(s) for kk, s in zip(keys, rng.choice([-1, 1], size=len(keys)))})
    for pat in patterns:
        gpos = np.empty(k, dtype=object)
        for x, val in gb.items():
            gpos[x] = val
        for br, (c, members) in branches.items():
            s = pat[br]
            for x in members:
                gpos[x] = gb[c] + s * (int(f_loc[x]) - int(f_loc[c]))
        if len(set(gpos.tolist())) == k:
            return gpos
    return None


# --------------------------------------------------------------------------
# maximal subsets


def maximal_cliques(adj_sets):
    """Bron-Kerbosch with pivoting; cliques returned as sorted lists."""
    out = []

    def expand(R, P, X):
        if not P and not X:
            out.append(sorted(R))
            return
        pivot = max(P | X, key=lambda w: len(adj_sets[w] & P))
        for w in list(P - adj_sets[pivot]):
            expand(R | {w}, P & adj_sets[w], X & adj_sets[w])
            P = P - {w}
            X = X | {w}

    expand(set(), set(adj_sets), set())
    out.sort(key=lambda c: (-len(c), c))
    return out


def maximal_reconstructible_subsets(eg: EmbeddedGraph, budget=DEFAULT_BUDGET) -> ReconReport:
    """Maximal vertex sets whose pairwise distances are all forced.

    Each component is first enumerated globally (with a sixteenth of the
    budget when it has a cut vertex); if that runs out the component falls back to the block route, which certifies pairs from
    per-block searches and cut-vertex reflections and leaves the rest
    unknown.  Unknown pairs are treated as non-reconstructible in the listed
    subsets, and ``exhausted`` is then False.
    """
    n = eg.n
    recon = np.zeros((n, n), dtype=bool)
    unknown = set()
    exhausted = True
    route = "exact"
    for comp in connected_components(eg.graph):
        idx = np.array(comp, dtype=int)
        if len(comp) == 1:
            recon[comp[0], comp[0]] = True
            continue
        search = _Search(eg, comp)
        # with a cut vertex the global count grows like 2^(#blocks); give the
        # global attempt a small share and leave the rest to the block route
        first = budget if len(biconnected_components(eg.induced(comp)[0].graph)) == 1 else max(1, budget >> 4)
        _, _, _, status, broken = search.run(first, store_cap=0)
        if status == 1:
            oidx = np.array(search.order, dtype=int)
            recon[np.ix_(oidx, oidx)] = ~broken
            continue
        route = "blocks"
        r_loc, b_loc = _block_route(eg, comp, budget)
        recon[np.ix_(idx, idx)] = r_loc
        undecided = ~(r_loc | b_loc)
        for a, b in zip(*np.nonzero(np.triu(undecided, 1))):
            unknown.add((comp[a], comp[b]))
        if undecided.any():
            exhausted = False
    np.fill_diagonal(recon, True)
    pairs = {(int(a), int(b)) for a, b in zip(*np.nonzero(np.triu(recon, 1)))}
    adj_sets = {v: set() for v in range(n)}
    for a, b in pairs:
        adj_sets[a].add(b)
        adj_sets[b].add(a)
    subsets = maximal_cliques(adj_sets) if n else []
    return ReconReport(pairs, subsets, exhausted, unknown, route)


# --------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class WitnessPartition:
    """Connected partition with cross-block offsets; ``offsets[(i, j)]`` is
    ``f(a_i) - f(a_j)`` for any edge ``a_i a_j`` between blocks i and j."""

    blocks: tuple
    offsets: dict

    def block_of(self):
        out = {}
        for i, b in enumerate(self.blocks):
            for v in b:
                out[v] = i
        return out

    def to_json(self):
        rows = []
        for (i, j), q in sorted(self.offsets.items()):
            rows.append(f"{i} {j} {q.numerator}/{q.denominator}")
        return {"blocks": [sorted(b) for b in self.blocks], "offsets": rows}

    @classmethod
    def from_json(cls, data):
        offsets = {}
        for row in data["offsets"]:
            i, j, q = row.split()
            offsets[(int(i), int(j))] = Fraction(q)
        return cls(tuple(tuple(b) for b in data["blocks"]), offsets)


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    reason: str = ""
    detail: tuple = ()

    def __bool__(self):
        return self.ok


def cross_edges(g: Graph, block_of):
    return [(u, v) for u, v in g.edges if block_of[u] != block_of[v]]


def validate_witness(eg: EmbeddedGraph, w: WitnessPartition) -> WitnessCheck:
    """Check the three witness conditions exactly.

    The cycle condition is checked on a fundamental cycle basis: with
    antisymmetric offsets the cycle sum is linear over integer cycle
    combinations, and fundamental cycles span them.
    """
    g = eg.graph
    f = eg.positions
    seen = [b for blk in w.blocks for b in blk]
    if sorted(seen) != list(range(g.n)):
        return WitnessCheck(False, "not-a-partition")
    block_of = w.block_of()
    for i, blk in enumerate(w.blocks):
        if not blk:
            return WitnessCheck(False, "empty-block", (i,))
        sub, _ = g.induced(blk)
        if not is_connected(sub):
            return WitnessCheck(False, "block-disconnected", (i,))
    W = cross_edges(g, block_of)
    if 2 * len(W) > g.m:
        return WitnessCheck(False, "too-many-cross-edges", (len(W), g.m))
    off = dict(w.offsets)
    for (i, j), q in list(off.items()):
        if i == j and q != 0:
            return WitnessCheck(False, "nonzero-diagonal", (i,))
    for u, v in W:
        for a, b in ((u, v), (v, u)):
            i, j = block_of[a], block_of[b]
            q = off.get((i, j))
            if q is None:
                return WitnessCheck(False, "missing-offset", (i, j))
            if f[a] - f[b] != q:
                return WitnessCheck(False, "offset-mismatch", (a, b))
    for cyc in cycle_basis(g):
        total = Fraction(0)
        for a, b in cycle_edges(cyc):
            i, j = block_of[a], block_of[b]
            if i != j:
                total += off[(i, j)]
        if total != 0:
            return WitnessCheck(False, "cycle-sum", tuple(cyc))
    return WitnessCheck(True)


def witness_from_realization(eg: EmbeddedGraph, g_pos: dict, u, v) -> WitnessPartition:
    """Blocks are the components of G minus the anti-aligned edges, after
    reflecting g if needed so that at most half the edges are anti-aligned."""
    G = eg.graph
    f = eg.positions
    anti = [(a, b) for a, b in G.edges if g_pos[a] - g_pos[b] == -(f[a] - f[b])]
    if 2 * len(anti) > G.m:
        anti = [(a, b) for a, b in G.edges if (a, b) not in set(anti)]
    anti_set = set(anti)
    comps = components_of(G.n, [e for e in G.edges if e not in anti_set])
    cu = next(c for c in comps if u in c)
    cv = next(c for c in comps if v in c)
    if cu is cv:
        raise ValueError("realization does not separate the pair")
    rest = [c for c in comps if c is not cu and c is not cv]
    blocks = (tuple(cu), tuple(cv)) + tuple(tuple(c) for c in rest)
    block_of = {x: i for i, b in enumerate(blocks) for x in b}
    offsets = {}
    for a, b in anti:
        i, j = block_of[a], block_of[b]
        offsets[(i, j)] = f[a] - f[b]
        offsets[(j, i)] = f[b] - f[a]
    return WitnessPartition(blocks, offsets)


def extract_witness(eg: EmbeddedGraph, u, v, realization=None, budget=DEFAULT_BUDGET) -> WitnessPartition:
    """Witness partition with ``u`` in block 0 and ``v`` in block 1.

    ``realization`` (vertex -> position) may be supplied; otherwise one is
    searched for.  Other components are carried along by translation.
    """
    G = eg.graph
    f = eg.positions
    comps = connected_components(G)
    comp_of = {x: i for i, c in enumerate(comps) for x in c}
    if realization is None:
        if comp_of[u] == comp_of[v]:
            realization = _violating_realization(eg, u, v, budget)
            if realization is None:
                raise ValueError(f"pair {(u, v)} is reconstructible")
        else:
            realization = {}
    g_pos = dict(realization)
    span = max(f) - min(f) if f else 0
    total = sum(abs(f[a] - f[b]) for a, b in G.edges)
    shift = 2 * (span + total) + 1
    for i, c in enumerate(comps):
        if c[0] in g_pos:
            continue
        offset = shift * (i + 1) if (v in c and comp_of[u] != comp_of[v]) else 0
        if any(x in g_pos for x in c):
            continue
        for x in c:
            g_pos[x] = f[x] + offset
    if len(set(g_pos.values())) != G.n:
        # realization positions may overlap translated copies; push them apart
        base = comp_of[u]
        for i, c in enumerate(comps):
            if i == base or (comp_of[u] != comp_of[v] and v in c):
                continue
            for x in c:
                g_pos[x] = f[x] + shift * (i + 2) * 3
    if abs(g_pos[u] - g_pos[v]) == abs(f[u] - f[v]):
        raise ValueError("supplied realization keeps the pair distance")
    return witness_from_realization(eg, g_pos, u, v)


@dataclass
class WitnessEstimate:
    frequency: float
    hits: int
    trials: int
    exponent: int
    bound: float
    sigma: float


def cross_stats(g: Graph, blocks):
    """``(V', C2, k)`` for a partition: vertices touched by cross edges, the
    non-trivial components they span, and the number of blocks."""
    block_of = {x: i for i, b in enumerate(blocks) for x in b}
    W = cross_edges(g, block_of)
    touched = sorted({x for e in W for x in e})
    comps = components_of(g.n, W)
    c2 = sum(1 for c in comps if len(c) > 1)
    return len(touched), c2, len(blocks)


def estimate_witness_probability(g: Graph, blocks, pool_positions, trials, seed=0) -> WitnessEstimate:
    """Monte Carlo frequency with which ``blocks`` is a witness when the
    vertices of ``g`` take a uniformly random injection into the pool."""
    pool = [Fraction(p) for p in pool_positions]
    if len(set(pool)) != len(pool):
        raise ValueError("pool positions must be distinct")
    ell = g.n
    if 2 * ell > len(pool):
        raise ValueError(f"pool of {len(pool)} is too small for {ell} vertices")
    vprime, c2, k = cross_stats(g, blocks)
    exponent = vprime - c2 - (k - 1)
    bound = (len(pool) / 2) ** (-exponent)
    block_of = {x: i for i, b in enumerate(blocks) for x in b}
    W = cross_edges(g, block_of)

    structural = sorted(block_of) == list(range(g.n)) and 2 * len(W) <= g.m and all(
        is_connected(g.induced(b)[0]) for b in blocks)
    if not structural:
        sig = (min(bound, 1.0) * (1 - min(bound, 1.0)) / trials) ** 0.5
        return WitnessEstimate(0.0, 0, trials, exponent, bound, sig)

    scale = 1
    for p in pool:
        scale = scale * p.denominator // np.gcd(scale, p.denominator)
    ints = [int(p * scale) for p in pool]
    dtype = np.int64 if max(abs(x) for x in ints) < (1 << 60) // max(g.n, 1) else object
    pool_arr = np.array(ints, dtype=dtype)
    rng = np.random.default_rng(seed)
    hits = 0
    # orient every cross edge from the lower to the higher block index
    groups = {}
    for a, b in W:
        i, j = block_of[a], block_of[b]
        if i > j:
            a, b, i, j = b, a, j, i
        groups.setdefault((i, j), []).append((a, b))
    cycles = []
    for cyc in cycle_basis(g):
        steps = []
        for a, b in cycle_edges(cyc):
            i, j = block_of[a], block_of[b]
            if i != j:
                steps.append(((min(i, j), max(i, j)), 1 if i < j else -1))
        if steps:
            cycles.append(steps)
    batch = 4096
    done = 0
    while done < trials:
        t = min(batch, trials - done)
        perm = np.argsort(rng.random((t, len(pool))), axis=1)[:, :ell]
        P = pool_arr[perm]
        ok = np.ones(t, dtype=bool)
        offs = {}
        for key, es in groups.items():
            a0, b0 = es[0]
            d0 = P[:, a0] - P[:, b0]
            for a, b in es[1:]:
                ok &= (P[:, a] - P[:, b]) == d0
            offs[key] = d0
        for steps in cycles:
            total = np.zeros(t, dtype=dtype)
            for key, s in steps:
                total = total + s * offs[key]
            ok &= total == 0
        hits += int(ok.sum())
        done += t
    freq = hits / trials
    pb = min(bound, 1.0)
    sigma = (pb * (1 - pb) / trials) ** 0.5
    return WitnessEstimate(freq, hits, trials, exponent, bound, sigma)
