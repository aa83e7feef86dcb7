import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from linerecon.graph_core import (EmbeddedGraph, Graph, InstanceError, MultiGraph, biconnected_components,
                                  bridges, connected_components, cycle_basis, cycle_edges, distance_map,
                                  graph_from_lines, is_connected, parse_rational, read_instance,
                                  write_instance)

from conftest import to_nx


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


@st.composite
def embedded(draw, max_n=8):
    g = draw(graphs(max_n))
    nums = draw(st.lists(st.integers(-10**6, 10**6), min_size=g.n, max_size=g.n, unique=True))
    dens = draw(st.lists(st.integers(1, 50), min_size=g.n, max_size=g.n))
    pos = [Fraction(a, 1) + Fraction(i, 51 * d) for i, (a, d) in enumerate(zip(nums, dens))]
    if len(set(pos)) != g.n:
        pos = [Fraction(a) for a in nums]
    return EmbeddedGraph(g, pos)


def test_graph_normalises_and_rejects():
    g = Graph(3, [(2, 0), (1, 2)])
    assert g.edges == ((0, 2), (1, 2))
    with pytest.raises(ValueError):
        Graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])


def test_embedded_graph_rejects_collisions():
    with pytest.raises(InstanceError):
        EmbeddedGraph(Graph.path(3), (0, 1, 0))
    with pytest.raises(InstanceError):
        EmbeddedGraph(Graph.path(3), (0, 1))


def test_scaled_positions():
    eg = EmbeddedGraph(Graph.path(3), (Fraction(1, 2), Fraction(1, 3), 2))
    ints, scale = eg.scaled
    assert scale == 6 and ints == (3, 2, 12)


def test_multigraph_keeps_loops_and_parallels():
    mg = MultiGraph(2, [(0, 1), (1, 0), (1, 1)])
    assert mg.m == 3
    assert list(mg.degrees) == [2, 4]


def test_distance_map():
    eg = EmbeddedGraph(Graph.path(3), (0, 1, 3))
    assert distance_map(eg) == {(0, 1): 1, (1, 2): 2}


@given(graphs())
def test_components_match_networkx(g):
    ours = sorted(map(sorted, connected_components(g)))
    theirs = sorted(sorted(c) for c in nx.connected_components(to_nx(g)))
    assert ours == theirs
    assert is_connected(g) == (g.n <= 1 or nx.is_connected(to_nx(g)))


@given(graphs())
def test_cycle_basis_size_and_shape(g):
    basis = cycle_basis(g)
    assert len(basis) == g.m - g.n + len(connected_components(g))
    for cyc in basis:
        assert len(cyc) >= 3 and len(set(cyc)) == len(cyc)
        for a, b in cycle_edges(cyc):
            assert g.has_edge(a, b)


@given(graphs())
def test_cycle_basis_spans_cycle_space(g):
    # over GF(2): rank of basis vectors equals the cycle-space dimension
    idx = g.edge_index
    rows = []
    for cyc in cycle_basis(g):
        v = 0
        for a, b in cycle_edges(cyc):
            v ^= 1 << idx[(min(a, b), max(a, b))]
        rows.append(v)
    rank, pivots = 0, []
    for v in rows:
        for p in pivots:
            v = min(v, v ^ p)
        if v:
            pivots.append(v)
            rank += 1
    assert rank == len(rows)


@given(graphs())
def test_blocks_match_networkx(g):
    ours = sorted(sorted(b) for b in biconnected_components(g))
    theirs = sorted(sorted(b) for b in nx.biconnected_components(to_nx(g)))
    assert ours == theirs
    assert sorted(bridges(g)) == sorted(tuple(sorted(e)) for e in nx.bridges(to_nx(g)))


@given(embedded())
def test_instance_round_trip(eg):
    assert read_instance(write_instance(eg)) == eg


def test_parse_rational():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational("7") == 7
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("1/-2")


@pytest.mark.parametrize("text,line", [
    ("", None),
    ("2\n", 1),
    ("2 1\n0 0\n1 0\n0 1\n", 3),
    ("2 1\n0 0\n0 1\n0 1\n", 3),
    ("2 1\n0 0\n1 1\n0 0\n", 4),
    ("2 2\n0 0\n1 1\n0 1\n1 0\n", 5),
    ("2 1\n0 0\n1 1\n0 5\n", 4),
    ("2 1\n0 x\n1 1\n0 1\n", 2),
    ("2 1\n0 0\n1 1\n", 3),
])
def test_malformed_instances_report_line(text, line):
    with pytest.raises(InstanceError) as exc:
        read_instance(text)
    assert exc.value.line == line


def test_comments_and_rationals():
    eg = read_instance("# header\n3 2\n0 1/2\n1 -3/4  # c\n2 5\n0 1\n1 2\n")
    assert eg.positions == (Fraction(1, 2), Fraction(-3, 4), Fraction(5))


def test_graph_from_lines():
    g = graph_from_lines(["3", "0 1", "# skip", "1 2"])
    assert g == Graph.path(3)


def test_petersen_shape():
    g = Graph.petersen()
    assert g.m == 15 and set(g.degrees.tolist()) == {3}
    assert nx.is_isomorphic(to_nx(g), nx.petersen_graph())
