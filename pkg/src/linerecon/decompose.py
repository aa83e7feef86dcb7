"""2-core, kernel, edge expansion, the weighted pruning process and the
good-graph checker.

Expansion follows the usual sparse-random-graph convention
``Phi(S) = e(S, S^c) / d(S)`` with ``d(S)`` the degree sum in the host
graph, minimised over nonempty ``S`` with ``|S| <= |V|/2``.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .graph_core import (Graph, MultiGraph, bridges, components_of,
                         connected_components, is_connected)

log = logging.getLogger(__name__)

EXACT_LIMIT = 24


# --------------------------------------------------------------------------
# 2-core and kernel


def two_core_vertices(g: Graph) -> list:
    deg = [len(a) for a in g.adj]
    alive = [True] * g.n
    queue = deque(v for v in range(g.n) if deg[v] <= 1)
    while queue:
        v = queue.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for w in g.adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] == 1:
                    queue.append(w)
    return [v for v in range(g.n) if alive[v]]


def two_core(g: Graph) -> Graph:
    """Largest subgraph of minimum degree 2, relabelled in increasing vertex
    order (see :func:`two_core_vertices` for the labels)."""
    return g.induced(two_core_vertices(g))[0]


@dataclass
class KernelDecomposition:
    two_core: Graph
    core_vertices: list                 # two_core index -> vertex of the input
    bare_paths: list                    # vertex sequences (input labels), one per kernel edge
    kernel: MultiGraph
    kernel_vertex_map: list             # kernel index -> vertex of the input
    edge_path_lengths: list             # aligned with kernel.edges
    pure_cycles: list = field(default_factory=list)

    @property
    def max_bare_path(self):
        return max(self.edge_path_lengths, default=0)

    def to_json(self):
        return {
            "core_vertices": self.core_vertices,
            "kernel_vertex_map": self.kernel_vertex_map,
            "kernel_edges": [list(e) for e in self.kernel.edges],
            "edge_path_lengths": self.edge_path_lengths,
            "pure_cycles": self.pure_cycles,
        }


def kernelize(g: Graph) -> KernelDecomposition:
    """Contract every maximal bare path of the 2-core to one kernel edge.

    Kernel vertices are the core vertices of degree >= 3.  Components of the
    core without such a vertex are cycles; they are listed in
    ``pure_cycles`` and left out of the kernel.
    """
    core_v = two_core_vertices(g)
    core, _ = g.induced(core_v)
    deg = [len(a) for a in core.adj]
    branch = [v for v in range(core.n) if deg[v] >= 3]
    kidx = {v: i for i, v in enumerate(branch)}
    used = set()
    paths, kedges, lengths = [], [], []
    for b in branch:
        for first in sorted(core.adj[b]):
            e0 = (min(b, first), max(b, first))
            if e0 in used:
                continue
            used.add(e0)
            walk = [b, first]
            prev, cur = b, first
            while deg[cur] == 2:
                nxt = core.adj[cur][0] if core.adj[cur][0] != prev else core.adj[cur][1]
                used.add((min(cur, nxt), max(cur, nxt)))
                prev, cur = cur, nxt
                walk.append(cur)
            paths.append([core_v[x] for x in walk])
            kedges.append((kidx[walk[0]], kidx[walk[-1]]))
            lengths.append(len(walk) - 1)
    cycles = []
    for comp in connected_components(core):
        if len(comp) > 1 and all(deg[v] == 2 for v in comp):
            start = comp[0]
            cyc = [start]
            prev, cur = start, core.adj[start][0]
            while cur != start:
                cyc.append(cur)
                nxt = core.adj[cur][0] if core.adj[cur][0] != prev else core.adj[cur][1]
                prev, cur = cur, nxt
            cycles.append([core_v[x] for x in cyc])
    kernel = MultiGraph(len(branch), tuple(kedges))
    return KernelDecomposition(core, core_v, paths, kernel, [core_v[b] for b in branch],
                               lengths, cycles)


# --------------------------------------------------------------------------
# expansion


@dataclass(frozen=True)
class ExpansionReport:
    phi: Fraction
    witness_set: tuple
    exact: bool


def phi_of(g: Graph, S, degrees=None) -> Fraction:
    """Phi(S) for one set; zero-degree sets give 0."""
    S = set(S)
    deg = g.degrees if degrees is None else degrees
    d = sum(int(deg[v]) for v in S)
    cut = sum(1 for u, v in g.edges if (u in S) != (v in S))
    return Fraction(0) if d == 0 else Fraction(cut, d)


def _mask_to_set(mask):
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def expansion(g: Graph, mode="exact", seed=0, restarts=64) -> ExpansionReport:
    """Minimum of Phi(S) over nonempty ``S`` with ``|S| <= n/2``.

    ``exact`` enumerates every such set (n <= 24).  ``sampled`` runs a
    randomised local search; the set it reports is genuine, so its value is
    an upper bound on the true minimum, and ``exact`` is False.
    """
    if g.n < 2:
        raise ValueError("expansion needs at least two vertices")
    if mode == "exact":
        if g.n > EXACT_LIMIT:
            raise ValueError(f"exact expansion is limited to {EXACT_LIMIT} vertices")
        cut, w, mask = kernels.min_ratio_set(g.nbr_masks, g.degrees, g.degrees, g.n // 2, g.edge_array())
        return ExpansionReport(Fraction(cut, w), _mask_to_set(mask), True)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    best = _local_search(g, g.degrees, g.n // 2, seed, restarts)
    return ExpansionReport(phi_of(g, best), tuple(sorted(best)), False)


def _local_search(g, weights, limit, seed, restarts):
    rng = np.random.default_rng(seed)
    deg = g.degrees
    w = [int(x) for x in weights]
    best, best_val = None, None
    # components are always candidates: they give Phi = 0
    for comp in connected_components(g):
        if len(comp) <= limit:
            return set(comp)
    for r in range(restarts):
        size = int(rng.integers(1, limit + 1))
        start = int(rng.integers(g.n))
        # grow a BFS ball of the drawn size
        S, queue = {start}, deque([start])
        while queue and len(S) < size:
            x = queue.popleft()
            for y in g.adj[x]:
                if y not in S and len(S) < size:
                    S.add(y)
                    queue.append(y)
        inside = {v: sum(1 for y in g.adj[v] if y in S) for v in range(g.n)}
        cut = sum(int(deg[v]) - inside[v] for v in S)
        tot = sum(w[v] for v in S)
        improved = True
        while improved:
            improved = False
            for v in rng.permutation(g.n):
                v = int(v)
                if v in S:
                    if len(S) == 1:
                        continue
                    nc = cut - (int(deg[v]) - inside[v]) + inside[v]
                    nt = tot - w[v]
                else:
                    if len(S) >= limit:
                        continue
                    nc = cut + int(deg[v]) - 2 * inside[v]
                    nt = tot + w[v]
                if nt > 0 and tot > 0 and nc * tot < cut * nt:
                    sign = -1 if v in S else 1
                    (S.discard if v in S else S.add)(v)
                    for y in g.adj[v]:
                        inside[y] += sign
                    cut, tot = nc, nt
                    improved = True
        val = Fraction(cut, tot) if tot else Fraction(0)
        if best_val is None or val < best_val:
            best, best_val = set(S), val
    return best


# --------------------------------------------------------------------------
# pruning


@dataclass
class PruneStep:
    rule: int
    removed: tuple
    weight_before: int
    weight_after: int
    required: Fraction
    ok: bool


@dataclass
class PruneResult:
    graph: Graph
    vertices: list                      # surviving vertices (input labels)
    log: list
    exact: bool
    precondition: bool
    conclusions: dict

    @property
    def ledger_ok(self):
        return all(s.ok and s.weight_after >= 0 for s in self.log)


def _weight(g: Graph, alive, present):
    """Sum over deleted edges of the number of endpoints still alive."""
    total = 0
    for e in g.edges:
        if e not in present:
            total += alive[e[0]] + alive[e[1]]
    return total


def _sparse_set(g, alive_list, present, c, exact, seed):
    """Vertices S (input labels) of the current graph with
    10 * e(S, S^c) < c * d_G(S) and |S| <= |V_i|/2, or None."""
    sub_edges = [(u, v) for u, v in present]
    loc = {v: i for i, v in enumerate(alive_list)}
    cur = Graph(len(alive_list), tuple((loc[u], loc[v]) for u, v in sub_edges))
    wts = [int(g.degrees[v]) for v in alive_list]
    limit = cur.n // 2
    if limit < 1:
        return None
    if exact:
        mask = kernels.first_sparse_cut(cur.nbr_masks, cur.degrees, wts, limit,
                                        c.numerator, 10 * c.denominator, cur.edge_array())
        return [alive_list[i] for i in _mask_to_set(mask)] if mask else None
    best = _local_search(cur, wts, limit, seed, 32)
    S = sorted(best)
    cut = sum(1 for u, v in cur.edges if (u in best) != (v in best))
    if 10 * c.denominator * cut < c.numerator * sum(wts[i] for i in S):
        return [alive_list[i] for i in S]
    return None


def prune(g: Graph, removed_edges, c, mode="auto", seed=0) -> PruneResult:
    """Run the two-rule deletion process on ``g`` minus ``removed_edges``.

    Rule 1 (applied first): delete a vertex of degree <= 1.  Rule 2: delete
    a set S with ``e(S, S^c) < c * d_G(S) / 10`` and ``|S| <= |V_i|/2``,
    where degrees ``d_G`` are taken in the original graph.  Removed edges
    carry weight equal to the number of their endpoints still present; the
    log records the weight before and after each step and whether it fell
    by the amount the rule promises (1 for rule 1, ``4c|S|/5`` for rule 2).
    """
    c = Fraction(c)
    if not (0 < c <= 1):
        raise ValueError("c must lie in (0, 1]")
    if g.n and int(g.degrees.min()) < 3:
        raise ValueError("the process needs minimum degree at least 3")
    removed = {(min(u, v), max(u, v)) for u, v in removed_edges}
    if not removed <= set(g.edges):
        raise ValueError("removed edges must belong to the graph")
    exact = g.n <= EXACT_LIMIT if mode == "auto" else mode == "exact"
    N, m0 = g.n, len(removed)
    alive = [1] * g.n
    present = set(g.edges) - removed
    adj = [set() for _ in range(g.n)]
    for u, v in present:
        adj[u].add(v)
        adj[v].add(u)
    steps = []
    weight = _weight(g, alive, present)
    step_seed = seed
    while True:
        alive_list = [v for v in range(g.n) if alive[v]]
        if not alive_list:
            break
        low = next((v for v in alive_list if len(adj[v]) <= 1), None)
        if low is not None:
            S, rule, need = [low], 1, Fraction(1)
        else:
            S = _sparse_set(g, alive_list, present, c, exact, step_seed)
            step_seed += 1
            if S is None:
                break
            rule, need = 2, Fraction(4) * c * len(S) / 5
        for v in S:
            alive[v] = 0
            for w in adj[v]:
                adj[w].discard(v)
                present.discard((min(v, w), max(v, w)))
            adj[v] = set()
        after = _weight(g, alive, present)
        steps.append(PruneStep(rule, tuple(S), weight, after, need, weight - after >= need))
        weight = after
    verts = [v for v in range(g.n) if alive[v]]
    final, _ = g.induced(verts)
    final = Graph(final.n, tuple(e for e in final.edges
                                 if (verts[e[0]], verts[e[1]]) in present))
    concl = {}
    concl["size"] = 2 * final.n >= N
    concl["min_degree"] = final.n > 0 and int(final.degrees.min()) >= 2
    concl["degree3"] = 4 * int((final.degrees >= 3).sum()) >= N if final.n else N == 0
    if final.n >= 2 and exact:
        concl["expander"] = expansion(final).phi >= c / 10
    elif final.n >= 2:
        concl["expander"] = expansion(final, "sampled", seed=seed).phi >= c / 10
    else:
        concl["expander"] = final.n == 1
    pre = 100 * m0 <= c * N
    return PruneResult(final, verts, steps, exact, pre, concl)


# --------------------------------------------------------------------------
# good graphs


def log_bounds(x, margin=Fraction(1, 10**9)):
    """Rational (lower, upper) bounds on ln(x) for x > 0."""
    val = Fraction(math.log(x))
    slack = margin * (1 + abs(val))
    return val - slack, val + slack


def girth(g: Graph):
    """Length of a shortest cycle, or None for a forest."""
    best = None
    for s in range(g.n):
        dist = {s: 0}
        par = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if best is not None and 2 * dist[x] + 1 >= best:
                break
            for y in g.adj[x]:
                if y not in dist:
                    dist[y], par[y] = dist[x] + 1, x
                    queue.append(y)
                elif par[x] != y:
                    L = dist[x] + dist[y] + 1
                    if best is None or L < best:
                        best = L
    return best


def max_bare_path(g: Graph):
    """Longest path (in edges) whose internal vertices all have degree 2."""
    deg = [len(a) for a in g.adj]
    best = 1 if g.m else 0
    seen = set()
    for v in range(g.n):
        if deg[v] == 2 or v in seen:
            continue
        for first in g.adj[v]:
            prev, cur, length = v, first, 1
            while deg[cur] == 2 and cur != v:
                nxt = g.adj[cur][0] if g.adj[cur][0] != prev else g.adj[cur][1]
                prev, cur = cur, nxt
                length += 1
            # a closed walk back to v is not a path; drop its last edge
            best = max(best, length - 1 if cur == v else length)
    for comp in connected_components(g):
        if len(comp) > 2 and all(deg[x] == 2 for x in comp):
            best = max(best, len(comp) - 1)
        elif len(comp) > 1 and all(deg[x] <= 2 for x in comp) and any(deg[x] < 2 for x in comp):
            best = max(best, len(comp) - 1)
    return best


@dataclass
class Condition:
    holds: bool
    exact: bool = True
    witness: object = None
    detail: str = ""


@dataclass
class GoodGraphReport:
    conditions: dict
    cond6_literal: Condition

    @property
    def good(self):
        return all(c.holds for c in self.conditions.values())

    @property
    def exact(self):
        return all(c.exact for c in self.conditions.values())


def good_graph_check(h: Graph, n, eps, gamma, seed=0) -> GoodGraphReport:
    """Evaluate the seven conditions of an (n, eps, gamma)-good graph.

    Logarithms are natural and bounded by rationals on the side that makes
    the condition harder to satisfy.  Condition 6 is reported for nonempty
    proper subsets; ``cond6_literal`` also allows the empty set, for which
    it always fails.  Conditions 2 and 7 are exhaustive up to 24 vertices;
    beyond that they come from a refutation search with ``exact=False``.
    """
    eps, gamma = Fraction(eps), Fraction(gamma)
    deg = h.degrees
    out = {}
    n3 = int((deg >= 3).sum()) if h.n else 0
    need = eps ** 3 * n / 10**5
    out[1] = Condition(n3 >= need, detail=f"{n3} vertices of degree >= 3, need {float(need):.6g}")

    if h.n < 2:
        out[2] = Condition(True, detail="fewer than two vertices")
    else:
        rep = expansion(h, "exact" if h.n <= EXACT_LIMIT else "sampled", seed=seed)
        ok = rep.phi >= gamma * eps
        out[2] = Condition(ok, rep.exact or not ok, None if ok else rep.witness_set,
                           f"phi {'=' if rep.exact else '<='} {rep.phi}")

    gi = girth(h)
    _, log_hi = log_bounds(n)
    out[3] = Condition(gi is None or gi > log_hi / (2 * eps), detail=f"girth {gi}")

    mb = max_bare_path(h)
    out[4] = Condition(mb < 1 / (gamma * eps), detail=f"longest bare path {mb}")

    ll_lo = log_bounds(math.log(n))[0] if n > 1 else None
    dmax = int(deg.max()) if h.n else 0
    dmin = int(deg.min()) if h.n else 0
    ok5 = ll_lo is not None and dmax <= 100 * ll_lo and dmin >= 2
    out[5] = Condition(ok5, detail=f"max degree {dmax}, min degree {dmin}")

    if h.n <= 1:
        out[6] = Condition(True, detail="no nonempty proper subset")
    else:
        comps = connected_components(h)
        if len(comps) > 1:
            out[6] = Condition(False, witness=tuple(comps[0]), detail="disconnected")
        else:
            br = bridges(h)
            if br:
                u, v = br[0]
                side = components_of(h.n, [e for e in h.edges if e != (u, v)])
                w = next(c for c in side if u in c)
                out[6] = Condition(False, witness=tuple(w), detail=f"bridge {u}-{v}")
            else:
                out[6] = Condition(True)
    lit = Condition(False, witness=(), detail="the empty set has no crossing edges")

    req = 0
    for v in range(h.n):
        if deg[v] >= 3:
            req |= 1 << v
    if req == 0:
        out[7] = Condition(True, detail="no vertex of degree >= 3")
    elif h.n <= EXACT_LIMIT:
        mask = kernels.small_boundary_set(h.nbr_masks, req, h.n // 2, 3)
        out[7] = Condition(mask == 0, witness=_mask_to_set(mask) if mask else None)
    else:
        bad = _boundary_refute(h, req, seed)
        out[7] = Condition(bad is None, bad is not None, bad, "refutation search" if bad is None else "")
    return GoodGraphReport(out, lit)


def _boundary_refute(h, req, seed):
    """Look for a set with a small outer boundary among BFS balls around
    degree-3 vertices.  Returns a violating set or None."""
    limit = h.n // 2
    for v in range(h.n):
        if not (req >> v) & 1:
            continue
        S, queue = {v}, deque([v])
        while queue and len(S) <= limit:
            boundary = {y for x in S for y in h.adj[x]} - S
            if len(boundary) < 3:
                return tuple(sorted(S))
            x = queue.popleft()
            for y in h.adj[x]:
                if y not in S and len(S) < limit:
                    S.add(y)
                    queue.append(y)
    return None


# --------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class PartitionStats:
    v_prime: int
    c1: int
    c2: int
    super_blocks: int


def _check_partition(g: Graph, blocks):
    seen = sorted(v for b in blocks for v in b)
    if seen != list(range(g.n)):
        raise ValueError("blocks must partition the vertex set")
    for b in blocks:
        if not is_connected(g.induced(b)[0]):
            raise ValueError(f"block {sorted(b)} is not connected")


def partition_stats(g: Graph, blocks, last=None, check=True) -> PartitionStats:
    """Cross-edge statistics of a connected partition.  The block with index
    ``last`` (default: the first largest one) is left out of the super-block
    graph.  ``check=False`` skips the block-connectivity test; the counts are
    still well defined."""
    blocks = [list(b) for b in blocks]
    if check:
        _check_partition(g, blocks)
    elif sorted(v for b in blocks for v in b) != list(range(g.n)):
        raise ValueError("blocks must partition the vertex set")
    k = len(blocks)
    big = max(range(k), key=lambda i: (len(blocks[i]), -i)) if last is None else last
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    cross = [(u, v) for u, v in g.edges if block_of[u] != block_of[v]]
    vprime = len({x for e in cross for x in e})
    c2 = sum(1 for comp in components_of(g.n, cross) if len(comp) > 1)
    others = [i for i in range(k) if i != big]
    pos = {b: j for j, b in enumerate(others)}
    aux = [(pos[block_of[u]], pos[block_of[v]]) for u, v in cross
           if block_of[u] != big and block_of[v] != big]
    supers = len(components_of(len(others), aux))
    return PartitionStats(vprime, k - 1, c2, supers)


def _connected_subsets(g, pool, size):
    pool = sorted(pool)
    for combo in itertools.combinations(pool, size):
        if is_connected(g.induced(combo)[0]):
            yield combo


def count_partitions_f(g: Graph, sizes) -> int:
    """Number of ordered connected partitions ``S_1, ..., S_{k-1}, S_k`` with
    ``|S_i| = sizes[i]``, ``S_k`` the remaining vertices (connected and at
    least as large as every other block), and exactly one super-block."""
    if g.n > 12:
        raise ValueError("exhaustive partition counting is limited to 12 vertices")
    sizes = [int(s) for s in sizes]
    if any(s < 1 for s in sizes):
        raise ValueError("block sizes must be positive")
    rest_size = g.n - sum(sizes)
    if rest_size < 1 or rest_size < max(sizes, default=0):
        return 0
    count = 0

    def rec(i, remaining, chosen):
        nonlocal count
        if i == len(sizes):
            last = sorted(remaining)
            if not is_connected(g.induced(last)[0]):
                return
            blocks = chosen + [last]
            if not sizes or partition_stats(g, blocks, last=len(blocks) - 1).super_blocks == 1:
                count += 1
            return
        for S in _connected_subsets(g, remaining, sizes[i]):
            rec(i + 1, remaining - set(S), chosen + [list(S)])

    rec(0, set(range(g.n)), [])
    return count
