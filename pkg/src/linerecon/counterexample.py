"""The hypercube instance with no reconstructible set larger than an edge.

Vertices are bit-vectors ``a`` of length k (vertex index = sum a_i 2^i),
placed at ``f(a) = sum a_i 3^i``.  Flipping the sign of digit j gives
``f_j``, which agrees with ``f`` on every cube edge.  For a non-edge
``(a, b)`` and the lowest differing bit ``j`` we have
``f_j(a) - f_j(b) != +-(f(a) - f(b))``, so no non-edge distance is forced.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .graph_core import EmbeddedGraph, Graph
from .reconstruct import AlternativeEmbedding, is_pair_reconstructible

MAX_K = 20
DIRECT_PAIR_LIMIT = 12


@dataclass(frozen=True)
class HypercubeInstance:
    k: int
    eg: EmbeddedGraph

    @property
    def ints(self):
        return [int(x) for x in self.eg.positions]


def bits(v, k):
    return tuple((v >> i) & 1 for i in range(k))


def build_hypercube(k) -> HypercubeInstance:
    if not (1 <= k <= MAX_K):
        raise ValueError(f"k must lie in [1, {MAX_K}]")
    n = 1 << k
    edges = tuple((v, v | (1 << i)) for v in range(n) for i in range(k) if not (v >> i) & 1)
    v = np.arange(n, dtype=np.int64)
    f = np.zeros(n, dtype=np.int64)
    for i in range(k):
        f += ((v >> i) & 1) * 3 ** i
    g = Graph(n, edges)
    inst = HypercubeInstance(k, EmbeddedGraph(g, tuple(Fraction(int(x)) for x in f)))
    assert g.m == k * (1 << (k - 1))
    return inst


def flip_values(k, j):
    v = np.arange(1 << k, dtype=np.int64)
    f = np.zeros(1 << k, dtype=np.int64)
    for i in range(k):
        f += (-1 if i == j else 1) * ((v >> i) & 1) * 3 ** i
    return f


def flip_embedding(inst: HypercubeInstance, j) -> AlternativeEmbedding:
    if not (0 <= j < inst.k):
        raise ValueError("flip index out of range")
    fj = flip_values(inst.k, j)
    f = inst.ints
    for u, v in inst.eg.graph.edges:
        if abs(int(fj[u]) - int(fj[v])) != abs(f[u] - f[v]):
            raise AssertionError(f"flip {j} changes the length of edge {(u, v)}")
    return AlternativeEmbedding(tuple(range(1 << inst.k)), tuple(Fraction(int(x)) for x in fj))


def is_triangle_free(g: Graph) -> bool:
    masks = g.nbr_masks
    return not any(masks[u] & masks[v] for u, v in g.edges)


@dataclass
class CounterexampleReport:
    k: int
    mode: str
    non_edges: int
    checked: int
    failures: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.failures


def verify_counterexample(inst: HypercubeInstance, mode="direct") -> CounterexampleReport:
    """Check that no non-edge distance is reconstructible.

    ``direct``: for every non-edge pair, the lowest differing bit j gives
    ``f_j(a) - f_j(b) != +-(f(a) - f(b))``.  Up to k = 12 this runs over all
    pairs; beyond that it runs over the equivalent digit-difference classes
    ``d = a - b in {-1, 0, 1}^k`` (the inequalities depend on the pair only
    through d, and non-edges are exactly the d with two or more nonzero
    entries).  ``oracle``: the exhaustive realization search, k <= 4.
    """
    k = inst.k
    n = 1 << k
    non_edges = n * (n - 1) // 2 - inst.eg.graph.m
    if mode == "oracle":
        if k > 4:
            raise ValueError("oracle mode is limited to k <= 4")
        rep = CounterexampleReport(k, mode, non_edges, 0)
        g = inst.eg.graph
        for a, b in itertools.combinations(range(n), 2):
            r = is_pair_reconstructible(inst.eg, a, b)
            rep.verdicts[(a, b)] = r
            if not g.has_edge(a, b):
                rep.checked += 1
                if r:
                    rep.failures.append((a, b))
        return rep
    if mode != "direct":
        raise ValueError(f"unknown mode {mode!r}")
    rep = CounterexampleReport(k, mode, non_edges, 0)
    if k <= DIRECT_PAIR_LIMIT:
        f = np.array(inst.ints, dtype=np.int64)
        fj = np.stack([flip_values(k, j) for j in range(k)])  # k x n
        for a in range(n):
            b = np.arange(a + 1, n, dtype=np.int64)
            x = b ^ a
            nonedge = (x & (x - 1)) != 0
            b, x = b[nonedge], x[nonedge]
            if not len(b):
                continue
            low = x & (-x)
            j = np.log2(low).astype(np.int64)
            d = f[a] - f[b]
            dj = fj[j, a] - fj[j, b]
            bad = (dj == d) | (dj == -d)
            rep.checked += len(b)
            for bb in b[bad]:
                rep.failures.append((a, int(bb)))
        return rep
    bad, checked = kernels.hypercube_classes(k)
    rep.checked = checked
    if bad >= 0:
        rep.failures.append(("class", bad))
    return rep
