import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings

from linerecon.graph_core import EmbeddedGraph, Graph, connected_components

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def record(criterion, passed, detail=""):
    line = f"ACCEPTANCE {criterion:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def emb(n, edges, pos):
    return EmbeddedGraph(Graph(n, edges), tuple(Fraction(p) for p in pos))


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def brute_realizations(eg):
    """Every realization (vertex -> position) of a connected embedded graph
    with vertex 0 pinned at f(0), from all 2^m sign vectors."""
    g, f = eg.graph, eg.positions
    out = set()
    parent = {0: None}
    order = [0]
    for x in order:
        for y in g.adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    tree = [(parent[y], y) for y in order[1:]]
    for signs in itertools.product((1, -1), repeat=len(tree)):
        pos = {0: f[0]}
        for (p, y), s in zip(tree, signs):
            pos[y] = pos[p] + s * (f[y] - f[p])
        if any(abs(pos[u] - pos[v]) != abs(f[u] - f[v]) for u, v in g.edges):
            continue
        if len(set(pos.values())) != g.n:
            continue
        out.add(tuple(pos[v] for v in range(g.n)))
    return out


def canon(pos):
    """Realization modulo translation and reflection."""
    a = tuple(p - pos[0] for p in pos)
    b = tuple(-x for x in a)
    return min(a, b)


def brute_pair_matrix(eg):
    """reconstructible[u][v] from brute-force realizations per component."""
    n = eg.n
    rec = [[False] * n for _ in range(n)]
    for comp in connected_components(eg.graph):
        sub, verts = eg.induced(comp)
        reals = brute_realizations(sub)
        for i, j in itertools.combinations(range(len(comp)), 2):
            d = abs(sub.positions[i] - sub.positions[j])
            ok = all(abs(r[i] - r[j]) == d for r in reals)
            rec[comp[i]][comp[j]] = rec[comp[j]][comp[i]] = ok
    for v in range(n):
        rec[v][v] = True
    return rec


def random_instance(rng, n, p, lo=-50, hi=50):
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    pos = rng.choice(range(lo, hi + 1), size=n, replace=False)
    return emb(n, edges, [int(x) for x in pos])


@pytest.fixture
def rng():
    import numpy as np
    return np.random.default_rng(12345)
