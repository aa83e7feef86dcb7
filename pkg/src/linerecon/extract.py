"""Large globally rigid subgraphs.

Two procedures: the entropy recursion (descend into a colour component of a
certificate colouring whose edge density, scaled by ``r log r``, is at least
the parent's) and the density-increment iteration built on the corollary
partition of a certificate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .graph_core import Graph, connected_components, is_connected
from .reconstruct import BudgetExceeded
from .rigidity import BLUE, RED, NacColoring, find_rigidity_certificate

DEFAULT_BUDGET = 1 << 22


@dataclass
class TraceStep:
    size: int
    edges: int
    branch: str


@dataclass
class ExtractionTrace:
    steps: list = field(default_factory=list)
    final_subgraph: tuple = ()
    bound: float = 0.0
    bound_ok: bool = True
    certified: bool = False
    extra: dict = field(default_factory=dict)

    def to_json_lines(self):
        import json
        rows = [json.dumps({"size": s.size, "edges": s.edges, "branch": s.branch}) for s in self.steps]
        rows.append(json.dumps({"final": list(self.final_subgraph), "bound": self.bound,
                                "bound_ok": self.bound_ok, "certified": self.certified,
                                **self.extra}))
        return "\n".join(rows)


def rigid_verdict(g: Graph, budget=DEFAULT_BUDGET):
    """``(rigid, certificate)``; single vertices are rigid, disconnected
    graphs are not (certificate None)."""
    if g.n <= 1:
        return True, None
    if not is_connected(g):
        return False, None
    v = find_rigidity_certificate(g, budget)
    if v.unknown:
        raise BudgetExceeded(f"rigidity search on {g.n} vertices exceeded {budget} nodes")
    return v.globally_rigid, v.certificate


def _ratio_ge(m1, r1, m2, r2):
    """m1 / (r1 log r1) >= m2 / (r2 log r2), exactly (r1, r2 >= 2)."""
    # m1 r2 log r2 >= m2 r1 log r1  <=>  r2^(m1 r2) >= r1^(m2 r1)
    return r2 ** (m1 * r2) >= r1 ** (m2 * r1)


def weakbt_bound_holds(size, n, m):
    """size >= 2 log 2 * m / (n log n)  <=>  n^(size n) >= 4^m."""
    if n < 2:
        return True
    return n ** (size * n) >= 4 ** m


def weakbt_bound(n, m):
    return 2 * math.log(2) * m / (n * math.log(n)) if n >= 2 else 0.0


def extract_weakbt(g: Graph, budget=DEFAULT_BUDGET):
    """Globally rigid vertex set of size at least ``2 log 2 * m / (n log n)``.

    At each level the current graph is either rigid (stop) or has a
    certificate; we move to the colour component maximising
    ``m_i / (r_i log r_i)`` (red before blue, then lowest index).
    Disconnected graphs move to their best component the same way, and an
    edgeless graph yields a single vertex.
    """
    if g.n < 2:
        raise ValueError("need at least two vertices")
    trace = ExtractionTrace()
    n0, m0 = g.n, g.m
    verts = list(range(g.n))
    cur = g
    while True:
        if cur.m == 0:
            trace.steps.append(TraceStep(cur.n, 0, "edgeless"))
            verts = verts[:1]
            break
        comps = connected_components(cur)
        if len(comps) > 1:
            cands = [(c, "component-%d" % i) for i, c in enumerate(comps)]
        else:
            rigid, cert = rigid_verdict(cur, budget)
            if rigid:
                trace.steps.append(TraceStep(cur.n, cur.m, "rigid"))
                break
            cands = [(list(c), "recurse-red-%d" % i) for i, c in enumerate(cert.red_components)]
            cands += [(list(c), "recurse-blue-%d" % j) for j, c in enumerate(cert.blue_components)]
        best = None
        for comp, label in cands:
            if len(comp) < 2:
                continue
            sub, _ = cur.induced(comp)
            if best is None or (not _ratio_ge(best[2], len(best[0]), sub.m, len(comp))):
                best = (comp, label, sub.m)
        comp, label, mi = best
        if not _ratio_ge(mi, len(comp), cur.m, cur.n):
            trace.extra.setdefault("ratio_drops", 0)
            trace.extra["ratio_drops"] += 1
        trace.steps.append(TraceStep(cur.n, cur.m, label))
        cur, _ = cur.induced(comp)
        verts = [verts[x] for x in comp]
    final = tuple(sorted(verts))
    sub, _ = g.induced(final)
    trace.final_subgraph = final
    trace.bound = weakbt_bound(n0, m0)
    trace.bound_ok = weakbt_bound_holds(len(final), n0, m0)
    trace.certified = rigid_verdict(sub, budget)[0]
    return final, trace


# --------------------------------------------------------------------------
# corollary partition and density increment


def garamvolgyi_partition(g: Graph, cert: NacColoring | None):
    """Blocks whose internal edges cover at least half of E and such that no
    vertex sends two edges into the same other block.

    With a certificate the blocks are the components of its majority colour
    (red on ties).  For a disconnected graph, ``cert=None`` gives its
    connected components.
    """
    if cert is None:
        if is_connected(g):
            raise ValueError("a connected graph needs a certificate")
        blocks = connected_components(g)
    else:
        n_red = sum(1 for c in cert.color if c == RED)
        major = cert.red_components if 2 * n_red >= g.m else cert.blue_components
        blocks = [list(c) for c in major]
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    inside = sum(1 for u, v in g.edges if block_of[u] == block_of[v])
    if 2 * inside < g.m:
        raise AssertionError("partition keeps fewer than half of the edges")
    for v in range(g.n):
        seen = set()
        for w in g.adj[v]:
            j = block_of[w]
            if j == block_of[v]:
                continue
            if j in seen:
                raise AssertionError(f"vertex {v} sends two edges into block {j}")
            seen.add(j)
    return blocks


def _edges_within(g, S):
    S = set(S)
    return sum(1 for u, v in g.edges if u in S and v in S)


@dataclass
class IncrementResult:
    vertices: list
    outcome: int
    density: Fraction
    target: Fraction


def density_increment_step(g: Graph, eps, budget=DEFAULT_BUDGET) -> IncrementResult:
    """One density-increment move on a graph that is not globally rigid.

    Outcome 1: every block has fewer than ``eps n`` vertices; return the
    densest block, whose density is at least half the graph's.  Otherwise
    ``A`` is the largest block (at least ``eps n`` vertices) and ``B`` the
    rest: outcome 2 returns ``B`` if
    ``|E(B)|/|B| >= alpha - |B|/n``, outcome 3 returns ``A`` if
    ``|E(A)|/|A|`` meets the same target.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    rigid, cert = rigid_verdict(g, budget)
    if rigid:
        raise ValueError("graph is globally rigid")
    blocks = garamvolgyi_partition(g, cert)
    n = g.n
    alpha = Fraction(g.m, n)
    if all(len(b) < eps * n for b in blocks):
        dens = [Fraction(_edges_within(g, b), len(b)) for b in blocks]
        i = max(range(len(blocks)), key=lambda j: (dens[j], -j))
        if dens[i] < alpha / 2:
            raise AssertionError("no block reaches half the density")
        return IncrementResult(sorted(blocks[i]), 1, dens[i], alpha / 2)
    ia = max(range(len(blocks)), key=lambda j: (len(blocks[j]), -j))
    A = set(blocks[ia])
    B = sorted(set(range(n)) - A)
    cross = sum(1 for u, v in g.edges if (u in A) != (v in A))
    if cross > len(B):
        raise AssertionError("more than |B| edges between A and B")
    target = alpha - Fraction(len(B), n)
    dB = Fraction(_edges_within(g, B), len(B))
    if dB >= target:
        return IncrementResult(B, 2, dB, target)
    dA = Fraction(_edges_within(g, A), len(A))
    if dA >= target:
        return IncrementResult(sorted(A), 3, dA, target)
    raise AssertionError("neither side meets the density target")


def dense_bound(n, m, eps):
    """(m/n) 2^(-log n / log(1/eps)) - 3 log n / eps."""
    eps = float(eps)
    return m / n * 2 ** (-math.log(n) / math.log(1 / eps)) - 3 * math.log(n) / eps


def extract_dense(g: Graph, eps, budget=DEFAULT_BUDGET):
    """Iterate :func:`density_increment_step` until the graph is rigid.

    The trace records the outcome counts, the accumulated loss
    ``sum (|V_{i-1}| - |V_i|) / |V_{i-1}|`` over outcome-3 steps, and checks
    ``|E_t|/|V_t| >= (m/n) 2^-|I1| - |I2| - loss`` exactly.
    """
    eps = Fraction(eps)
    if not (0 < eps < Fraction(1, 2)):
        raise ValueError("eps must lie in (0, 1/2)")
    if g.n < 1:
        raise ValueError("empty graph")
    trace = ExtractionTrace()
    verts = list(range(g.n))
    cur = g
    counts = {1: 0, 2: 0, 3: 0}
    loss = Fraction(0)
    while True:
        rigid, _ = rigid_verdict(cur, budget)
        if rigid:
            trace.steps.append(TraceStep(cur.n, cur.m, "rigid"))
            break
        res = density_increment_step(cur, eps, budget)
        trace.steps.append(TraceStep(cur.n, cur.m, f"outcome-{res.outcome}"))
        counts[res.outcome] += 1
        if res.outcome == 3:
            loss += Fraction(cur.n - len(res.vertices), cur.n)
        cur, _ = cur.induced(res.vertices)
        verts = [verts[x] for x in res.vertices]
    n, m = g.n, g.m
    final = tuple(sorted(verts))
    dens = Fraction(cur.m, cur.n)
    book = dens >= Fraction(m, n) / 2 ** counts[1] - counts[2] - loss
    i1_ok = n < 2 or counts[1] * math.log(1 / float(eps)) <= math.log(n) + 1e-9
    bound = dense_bound(n, m, eps) if n >= 2 else 0.0
    trace.final_subgraph = final
    trace.bound = bound
    trace.bound_ok = bound <= 0 or len(final) >= bound - 1e-9
    trace.certified = True
    trace.extra.update({"I1": counts[1], "I2": counts[2], "I3": counts[3],
                        "harmonic_loss": float(loss), "bookkeeping_ok": book, "I1_bound_ok": i1_ok})
    return final, trace
