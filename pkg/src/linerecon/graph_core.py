"""Graphs, line embeddings and the small amount of graph plumbing shared by
every other module.

Vertices are the dense integers ``0..n-1``.  Positions and lengths are
:class:`fractions.Fraction` values, so every equality test downstream is
exact.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction
Edge = tuple[int, int]


class InstanceError(ValueError):
    """Malformed instance text, or an invalid embedded graph."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _norm_edge(u, v):
    u, v = int(u), int(v)
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``range(n)``.

    ``edges`` is normalised to a sorted tuple of ``(u, v)`` with ``u < v``;
    loops and duplicate edges are rejected.
    """

    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = sorted(_norm_edge(u, v) for u, v in self.edges)
        for i, (u, v) in enumerate(norm):
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u < 0 or v >= self.n:
                raise ValueError(f"edge {(u, v)} out of range for n={self.n}")
            if i and norm[i - 1] == (u, v):
                raise ValueError(f"duplicate edge {(u, v)}")
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self):
        return len(self.edges)

    @cached_property
    def adj(self):
        nbrs = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def degrees(self):
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    @cached_property
    def edge_index(self):
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def nbr_masks(self):
        """Neighbourhood of each vertex as a Python-int bitmask."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    def has_edge(self, u, v):
        return _norm_edge(u, v) in self.edge_index

    def edge_array(self):
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array(self.edges, dtype=np.int64)

    def induced(self, vertices):
        """Return ``(H, verts)``: the induced subgraph relabelled to
        ``0..len(verts)-1`` and the sorted original labels."""
        verts = sorted(set(int(v) for v in vertices))
        local = {v: i for i, v in enumerate(verts)}
        sub = [(local[u], local[v]) for u, v in self.edges if u in local and v in local]
        return Graph(len(verts), sub), verts

    def without_edges(self, removed):
        drop = {_norm_edge(u, v) for u, v in removed}
        return Graph(self.n, [e for e in self.edges if e not in drop])

    def with_edges(self, added):
        new = set(self.edges) | {_norm_edge(u, v) for u, v in added}
        return Graph(self.n, new)

    @classmethod
    def complete(cls, n):
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def cycle(cls, n):
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n):
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def petersen(cls):
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return cls(10, outer + spokes + inner)


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph; loops and parallel edges are kept as given."""

    n: int
    edges: tuple = ()

    def __post_init__(self):
        norm = tuple(_norm_edge(u, v) for u, v in self.edges)
        for u, v in norm:
            if u < 0 or v >= self.n:
                raise ValueError(f"edge {(u, v)} out of range for n={self.n}")
        object.__setattr__(self, "edges", norm)

    @property
    def m(self):
        return len(self.edges)

    @cached_property
    def degrees(self):
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class EmbeddedGraph:
    """A graph together with an injective map of its vertices into Q."""

    graph: Graph
    positions: tuple = field(default=())

    def __post_init__(self):
        pos = tuple(Fraction(p) for p in self.positions)
        if len(pos) != self.graph.n:
            raise InstanceError(f"expected {self.graph.n} positions, got {len(pos)}")
        if len(set(pos)) != len(pos):
            raise InstanceError("positions are not pairwise distinct")
        object.__setattr__(self, "positions", pos)

    @property
    def n(self):
        return self.graph.n

    @cached_property
    def scaled(self):
        """``(ints, scale)`` with ``positions[i] == ints[i] / scale``."""
        scale = 1
        for p in self.positions:
            scale = scale * p.denominator // _gcd(scale, p.denominator)
        return tuple(int(p * scale) for p in self.positions), scale

    def relabel(self, positions):
        return EmbeddedGraph(self.graph, positions)

    def induced(self, vertices):
        sub, verts = self.graph.induced(vertices)
        return EmbeddedGraph(sub, [self.positions[v] for v in verts]), verts


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def distance_map(eg: EmbeddedGraph) -> dict:
    """Edge lengths ``|f(u) - f(v)|`` keyed by the normalised edge."""
    f = eg.positions
    return {(u, v): abs(f[u] - f[v]) for u, v in eg.graph.edges}


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def components_of(n, edges) -> list[list[int]]:
    uf = UnionFind(n)
    for u, v in edges:
        uf.union(u, v)
    groups = {}
    for v in range(n):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex sets of the components, each sorted, ordered by smallest vertex."""
    return components_of(g.n, g.edges)


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def bfs_tree(g: Graph, roots=None):
    """BFS spanning forest.  Returns ``(parent, order, depth)``; roots have
    parent ``-1``.  ``roots`` defaults to the smallest vertex of each
    component."""
    parent = [-2] * g.n
    depth = [0] * g.n
    order = []
    starts = list(roots) if roots is not None else range(g.n)
    for r in starts:
        if parent[r] != -2:
            continue
        parent[r] = -1
        queue = deque([r])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in g.adj[x]:
                if parent[y] == -2:
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    queue.append(y)
    if roots is not None:
        for v in range(g.n):
            if parent[v] == -2:
                # vertices unreachable from the given roots get their own trees
                sub_parent, sub_order, sub_depth = bfs_tree(g, roots=[v])
                for x in sub_order:
                    if parent[x] == -2:
                        parent[x] = sub_parent[x]
                        depth[x] = sub_depth[x]
                        order.append(x)
    return parent, order, depth


def cycle_basis(g: Graph) -> list[list[int]]:
    """Fundamental cycles of a BFS spanning forest.

    Each cycle is a vertex list ``[x1, ..., xr]`` in which consecutive
    vertices (and ``xr, x1``) are adjacent.  The basis has
    ``m - n + #components`` members.
    """
    parent, _, depth = bfs_tree(g)
    tree = set()
    for v in range(g.n):
        if parent[v] >= 0:
            tree.add(_norm_edge(v, parent[v]))
    cycles = []
    for u, v in g.edges:
        if (u, v) in tree:
            continue
        left, right = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = parent[a]
            left.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            right.append(b)
        while a != b:
            a, b = parent[a], parent[b]
            left.append(a)
            right.append(b)
        # left ends at the common ancestor, right repeats it
        cycles.append(left + right[-2::-1])
    return cycles


def cycle_edges(cycle: Sequence[int]) -> list[Edge]:
    r = len(cycle)
    return [(cycle[i], cycle[(i + 1) % r]) for i in range(r)]


def biconnected_components(g: Graph) -> list[list[int]]:
    """Vertex sets of the blocks (maximal 2-connected subgraphs and bridges).

    Isolated vertices are not reported.  Iterative Hopcroft-Tarjan.
    """
    disc = [-1] * g.n
    low = [0] * g.n
    blocks = []
    timer = 0
    for root in range(g.n):
        if disc[root] != -1 or not g.adj[root]:
            continue
        disc[root] = low[root] = timer
        timer += 1
        edge_stack = []
        stack = [(root, -1, iter(g.adj[root]))]
        while stack:
            x, px, it = stack[-1]
            advanced = False
            for y in it:
                if y == px:
                    continue
                if disc[y] == -1:
                    edge_stack.append((x, y))
                    disc[y] = low[y] = timer
                    timer += 1
                    stack.append((y, x, iter(g.adj[y])))
                    advanced = True
                    break
                if disc[y] < disc[x]:
                    edge_stack.append((x, y))
                    low[x] = min(low[x], disc[y])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[x])
                if low[x] >= disc[p]:
                    block = set()
                    while True:
                        a, b = edge_stack.pop()
                        block.add(a)
                        block.add(b)
                        if (a, b) == (p, x):
                            break
                    blocks.append(sorted(block))
    blocks.sort(key=lambda b: (b[0], len(b)))
    return blocks


def bridges(g: Graph) -> list[Edge]:
    out = []
    for b in biconnected_components(g):
        if len(b) == 2:
            out.append((b[0], b[1]))
    return sorted(out)


# --------------------------------------------------------------------------
# instance files


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(token: str) -> Fraction:
    if "/" in token:
        num, den = token.split("/", 1)
        den_i = int(den)
        if den_i <= 0:
            raise ValueError(f"bad denominator in {token!r}")
        return Fraction(int(num), den_i)
    return Fraction(int(token))


def read_instance(text: str) -> EmbeddedGraph:
    """Parse the ``n m`` / positions / edges text format."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((lineno, body.split()))
    if not rows:
        raise InstanceError("empty instance")
    lineno, head = rows[0]
    if len(head) != 2:
        raise InstanceError("header must be 'n m'", lineno)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise InstanceError("header must hold two integers", lineno) from None
    if n < 0 or m < 0:
        raise InstanceError("negative count in header", lineno)
    if len(rows) != 1 + n + m:
        last = rows[-1][0]
        raise InstanceError(f"expected {n} position lines and {m} edge lines, found {len(rows) - 1}", last)

    positions = [None] * n
    for lineno, toks in rows[1:1 + n]:
        if len(toks) != 2:
            raise InstanceError("position line must be 'vertex numerator/denominator'", lineno)
        try:
            idx = int(toks[0])
            val = parse_rational(toks[1])
        except (ValueError, ZeroDivisionError):
            raise InstanceError(f"cannot parse position {' '.join(toks)!r}", lineno) from None
        if not 0 <= idx < n:
            raise InstanceError(f"vertex index {idx} out of range", lineno)
        if positions[idx] is not None:
            raise InstanceError(f"vertex {idx} given twice", lineno)
        if val in positions:
            raise InstanceError(f"duplicate position {_fmt_rational(val)}", lineno)
        positions[idx] = val

    edges = []
    seen = set()
    for lineno, toks in rows[1 + n:]:
        if len(toks) != 2:
            raise InstanceError("edge line must be 'u v'", lineno)
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise InstanceError(f"cannot parse edge {' '.join(toks)!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise InstanceError(f"edge endpoint out of range in {u} {v}", lineno)
        if u == v:
            raise InstanceError(f"self-loop at {u}", lineno)
        e = _norm_edge(u, v)
        if e in seen:
            raise InstanceError(f"duplicate edge {u} {v}", lineno)
        seen.add(e)
        edges.append(e)
    return EmbeddedGraph(Graph(n, edges), positions)


def write_instance(eg: EmbeddedGraph) -> str:
    g = eg.graph
    lines = [f"{g.n} {g.m}"]
    lines += [f"{i} {_fmt_rational(p)}" for i, p in enumerate(eg.positions)]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def graph_from_lines(lines: Iterable[str]) -> Graph:
    """Bare graph format: first line ``n``, then ``u v`` lines."""
    rows = [ln.split("#", 1)[0].split() for ln in lines]
    rows = [r for r in rows if r]
    n = int(rows[0][0])
    return Graph(n, [(int(a), int(b)) for a, b in rows[1:]])
