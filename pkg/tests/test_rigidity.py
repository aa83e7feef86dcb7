import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from linerecon.graph_core import Graph, is_connected
from linerecon.reconstruct import is_pair_reconstructible
from linerecon.rigidity import (BLUE, RED, NacColoring, construct_flex_embedding, find_rigidity_certificate,
                                is_certificate, is_globally_rigid, is_nac_coloring)

from conftest import to_nx


def nac_by_cycles(g, color):
    """Reference: both colours present and no simple cycle is almost
    monochromatic."""
    if RED not in color or BLUE not in color:
        return False
    col = {e: c for e, c in zip(g.edges, color)}
    for cyc in nx.simple_cycles(to_nx(g)):
        cs = [col[(min(a, b), max(a, b))] for a, b in zip(cyc, cyc[1:] + cyc[:1])]
        if cs.count(RED) == 1 or cs.count(BLUE) == 1:
            return False
    return True


def brute_certificate_exists(g):
    for bits in itertools.product((RED, BLUE), repeat=g.m - 1):
        color = (RED,) + bits
        if is_certificate(g, color):
            return True
    return False


@st.composite
def connected_graphs(draw, max_n=7):
    n = draw(st.integers(2, max_n))
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}
    rest = [p for p in itertools.combinations(range(n), 2) if p not in edges]
    if rest:
        edges |= set(draw(st.lists(st.sampled_from(rest), unique=True)))
    return Graph(n, sorted(edges))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_complete_graphs_rigid(n):
    assert is_globally_rigid(Graph.complete(n))


def test_four_cycle_flex():
    g = Graph.cycle(4)
    v = find_rigidity_certificate(g)
    assert v.globally_rigid is False and v.certificate.intersection_ok()
    eg, alt = construct_flex_embedding(g, v.certificate)
    assert eg.positions == (0, 1, 3, 2)
    assert alt.positions == (0, 1, -1, -2)


def test_path_flex():
    g = Graph.path(3)
    eg, alt = construct_flex_embedding(g, find_rigidity_certificate(g).certificate)
    assert eg.positions == (0, 1, 3) and alt.positions == (0, 1, -1)


def test_petersen_not_rigid():
    assert not is_globally_rigid(Graph.petersen())


def test_disconnected_and_tiny():
    with pytest.raises(ValueError):
        find_rigidity_certificate(Graph(3, [(0, 1)]))
    assert is_globally_rigid(Graph(1))


def test_colour_validation():
    g = Graph.path(3)
    with pytest.raises(ValueError):
        is_nac_coloring(g, [RED])
    with pytest.raises(ValueError):
        is_nac_coloring(g, [RED, "green"])
    assert not is_nac_coloring(g, [RED, RED])


def test_certificate_json_and_swap():
    g = Graph.cycle(4)
    cert = find_rigidity_certificate(g).certificate
    js = cert.to_json()
    assert set(js["colors"]) == {f"{u} {v}" for u, v in g.edges}
    sw = cert.swapped()
    assert sw.red_components == cert.blue_components


@given(connected_graphs(), st.data())
def test_nac_test_matches_cycle_definition(g, data):
    color = tuple(data.draw(st.lists(st.sampled_from([RED, BLUE]), min_size=g.m, max_size=g.m)))
    assert is_nac_coloring(g, color) == nac_by_cycles(g, color)


@given(connected_graphs(), st.data())
def test_colour_swap_symmetry(g, data):
    color = tuple(data.draw(st.lists(st.sampled_from([RED, BLUE]), min_size=g.m, max_size=g.m)))
    sw = tuple(BLUE if c == RED else RED for c in color)
    assert is_nac_coloring(g, color) == is_nac_coloring(g, sw)
    assert is_certificate(g, color) == is_certificate(g, sw)


def test_nac_on_small_atlas():
    rng = np.random.default_rng(1)
    graphs = [h for h in nx.graph_atlas_g()[1:] if nx.is_connected(h) and h.number_of_edges() >= 2]
    for h in graphs:
        g = Graph(h.number_of_nodes(), list(h.edges))
        for _ in range(5):
            color = tuple(RED if b else BLUE for b in rng.integers(0, 2, g.m))
            assert is_nac_coloring(g, color) == nac_by_cycles(g, color)


@given(connected_graphs(max_n=6))
def test_search_matches_brute_force(g):
    if g.m > 12:
        return
    v = find_rigidity_certificate(g)
    assert v.globally_rigid == (not brute_certificate_exists(g))
    if v.certificate is not None:
        assert is_certificate(g, v.certificate.color)
        assert v.certificate.color[0] == RED


@given(connected_graphs(max_n=7))
def test_flex_embedding_breaks_a_pair(g):
    v = find_rigidity_certificate(g)
    if v.globally_rigid:
        return
    eg, alt = construct_flex_embedding(g, v.certificate)
    f, gs = eg.positions, alt.positions
    assert len(set(gs)) == g.n
    assert all(abs(f[a] - f[b]) == abs(gs[a] - gs[b]) for a, b in g.edges)
    diff = [(a, b) for a, b in itertools.combinations(range(g.n), 2)
            if abs(f[a] - f[b]) != abs(gs[a] - gs[b])]
    assert diff
    a, b = diff[0]
    assert not is_pair_reconstructible(eg, a, b)


def test_adding_edges_preserves_rigidity():
    rng = np.random.default_rng(2)
    for _ in range(60):
        h = nx.gnp_random_graph(7, 0.6, seed=int(rng.integers(1 << 30)))
        if not nx.is_connected(h):
            continue
        g = Graph(7, list(h.edges))
        if is_globally_rigid(g):
            non = [p for p in itertools.combinations(range(7), 2) if not g.has_edge(*p)]
            for p in non[:3]:
                assert is_globally_rigid(g.with_edges([p]))


def test_budget_unknown_verdict():
    v = find_rigidity_certificate(Graph.complete(7), budget=3)
    assert v.unknown and not v.exhausted
