import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chordram.errors import InvalidInput
from chordram.graph import (
    ChordSet,
    Embedding,
    SimpleGraph,
    VertexPartition,
    almost_bipartite_index,
    bipartition,
    build_chorded_cycle,
    chords_of,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    find_subgraph,
    is_bipartite,
    is_independent,
    shortest_odd_cycle,
)

import oracles
from strategies import chorded_cycles, graphs


def cc(n, chords=()):
    return build_chorded_cycle(n, ChordSet.of(n, chords))


# ------------------------------------------------------------ SimpleGraph


def test_simple_graph_rejects_loops_and_range():
    with pytest.raises(InvalidInput):
        SimpleGraph(3, frozenset({(1, 1)}))
    with pytest.raises(InvalidInput):
        SimpleGraph(3, frozenset({(0, 3)}))
    with pytest.raises(InvalidInput):
        SimpleGraph(-1)


def test_simple_graph_normalises_edge_orientation():
    g = SimpleGraph(3, frozenset({(2, 0), (0, 2), (1, 2)}))
    assert g.edges == {(0, 2), (1, 2)}
    assert g.degrees == (1, 1, 2)
    assert g.max_degree == 2


@given(graphs())
def test_degrees_match_edge_count(g):
    assert sum(g.degrees) == 2 * g.num_edges()
    assert g.max_degree == max(g.degrees, default=0)


# ------------------------------------------------------ chorded cycles


def test_chorded_cycle_c6_opposite_chord():
    g = cc(6, [(0, 3)])
    assert g.n == 6 and g.num_edges() == 7
    assert is_bipartite(g)


def test_chorded_cycle_without_chords_is_the_cycle():
    assert cc(5) == cycle_graph(5)


def test_chorded_cycle_triangles():
    g = cc(13, [(0, 2), (3, 5)])
    tri = SimpleGraph(6, frozenset({(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)}))
    assert Embedding(tuple(range(6))).is_valid(tri, g)


@pytest.mark.parametrize("bad", [[(0, 1)], [(0, 5)], [(2, 2)], [(0, 6)]])
def test_chord_set_rejects_cycle_edges_and_junk(bad):
    with pytest.raises(InvalidInput):
        ChordSet.of(6, bad)


def test_chord_set_rejects_repeats():
    with pytest.raises(InvalidInput):
        ChordSet.of(6, [(0, 3), (3, 0)])


@given(chorded_cycles())
def test_chorded_cycle_contains_cycle_via_identity(g):
    ident = Embedding(tuple(range(g.n)))
    assert ident.is_valid(cycle_graph(g.n), g)
    assert g.num_edges() == g.n + len(chords_of(g))


# --------------------------------------------------------- bipartition


def test_bipartition_even_cycle():
    part = bipartition(cycle_graph(6))
    assert set(part.parts) == {frozenset({0, 2, 4}), frozenset({1, 3, 5})}


def test_bipartition_odd_cycle_witness():
    part, witness = bipartition(cycle_graph(5), with_witness=True)
    assert part is None
    assert sorted(witness) == [0, 1, 2, 3, 4]


def test_bipartition_triangle_witness():
    part, witness = bipartition(cc(6, [(0, 2)]), with_witness=True)
    assert part is None and sorted(witness) == [0, 1, 2]


@given(graphs(max_n=9))
def test_bipartition_agrees_with_networkx(g):
    nxg = oracles.nx_graph(g.n, g.edges)
    part, witness = bipartition(g, with_witness=True)
    assert (part is not None) == oracles.nx.is_bipartite(nxg)
    if part is not None:
        assert part.is_proper(g) and part.domain == frozenset(range(g.n))
    else:
        assert len(witness) % 2 == 1
        assert all(g.has_edge(witness[i], witness[(i + 1) % len(witness)]) for i in range(len(witness)))


@given(graphs(max_n=8))
def test_shortest_odd_cycle_is_shortest(g):
    cyc = shortest_odd_cycle(g)
    nxg = oracles.nx_graph(g.n, g.edges)
    if cyc is None:
        assert oracles.nx.is_bipartite(nxg)
        return
    assert len(set(cyc)) == len(cyc)
    # no odd closed walk is shorter than the odd girth; check by length-l cycles
    for length in range(3, len(cyc), 2):
        for combo in itertools.permutations(range(g.n), length):
            if combo[0] != min(combo):
                continue
            assert not all(g.has_edge(combo[i], combo[(i + 1) % length]) for i in range(length))


# ------------------------------------------------------- almost bipartite


def test_index_examples():
    r = almost_bipartite_index(cycle_graph(5))
    assert r.k == 1 and len(r.witness) == 1
    assert almost_bipartite_index(cycle_graph(6)).k == 0
    r = almost_bipartite_index(cc(13, [(0, 2), (3, 5)]))
    assert r.k == 2
    assert oracles.brute_index(13, sorted(cc(13, [(0, 2), (3, 5)]).edges), 2) == 2


def test_index_none_for_k5():
    assert almost_bipartite_index(complete_graph(5)) is None
    assert almost_bipartite_index(complete_graph(3), 0) is None


def test_index_rejects_negative_cap():
    with pytest.raises(InvalidInput):
        almost_bipartite_index(cycle_graph(5), -1)


@given(graphs(max_n=8))
def test_index_zero_iff_bipartite(g):
    r = almost_bipartite_index(g)
    assert (r is not None and r.k == 0) == (bipartition(g) is not None)


@given(graphs(max_n=9))
def test_index_matches_brute_force(g):
    r = almost_bipartite_index(g, 4)
    expected = oracles.brute_index(g.n, sorted(g.edges), 4)
    assert (None if r is None else r.k) == expected
    if r is not None:
        assert is_independent(g, r.witness)
        assert bipartition(g.remove_vertices(r.witness)) is not None


@given(chorded_cycles(min_n=5, max_n=12, max_chords=5))
def test_index_minimality_exhaustive(g):
    r = almost_bipartite_index(g, 6)
    if r is None:
        return
    for size in range(r.k):
        for s in itertools.combinations(range(g.n), size):
            if is_independent(g, s):
                assert bipartition(g.remove_vertices(s)) is None


def test_index_on_long_chorded_cycles_matches_brute_force():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randrange(9, 13)
        cands = [(u, v) for u, v in itertools.combinations(range(n), 2) if (v - u) % n not in (1, n - 1)]
        chords = rng.sample(cands, rng.randint(1, 4))
        g = cc(n, chords)
        r = almost_bipartite_index(g, 4)
        assert (None if r is None else r.k) == oracles.brute_index(n, sorted(g.edges), 4)


# ------------------------------------------------------- subgraph search


def test_find_subgraph_examples():
    assert find_subgraph(cycle_graph(4), complete_graph(4)) is not None
    assert find_subgraph(cycle_graph(5), complete_multipartite(2, 3)) is None
    emb = find_subgraph(cc(6, [(0, 3)]), complete_multipartite(5, 5))
    assert emb is not None and emb.is_valid(cc(6, [(0, 3)]), complete_multipartite(5, 5))


def test_find_subgraph_larger_pattern_is_none():
    assert find_subgraph(cycle_graph(5), complete_graph(4)) is None


@given(graphs(max_n=5), graphs(max_n=7))
def test_find_subgraph_agrees_with_brute_force(p, h):
    emb = find_subgraph(p, h)
    brute = oracles.brute_subgraph(p.n, sorted(p.edges), h.n, sorted(h.edges)) if p.n <= h.n else None
    assert (emb is not None) == (brute is not None)
    if emb is not None:
        assert emb.is_valid(p, h)


# ---------------------------------------------------------- partitions


def test_vertex_partition_checks():
    with pytest.raises(InvalidInput):
        VertexPartition((frozenset({0, 1}), frozenset({1, 2})))
    with pytest.raises(InvalidInput):
        VertexPartition((frozenset({0}),))
    p = VertexPartition((frozenset({0, 2}), frozenset({1, 3})))
    assert p.is_proper(cycle_graph(4))
    assert not p.is_proper(cc(4, [(0, 2)]))
    assert p.part_of(3) == 1


@given(graphs(max_n=9))
def test_twin_swaps_are_automorphisms(g):
    from chordram.graph import twin_classes

    label = twin_classes(g)
    for u, v in itertools.combinations(range(g.n), 2):
        if label[u] == label[v]:
            perm = list(range(g.n))
            perm[u], perm[v] = v, u
            assert g.relabel(perm) == g


@given(graphs(max_n=6), graphs(min_n=6, max_n=10))
def test_find_subgraph_agrees_with_networkx_monomorphism(p, h):
    from networkx.algorithms.isomorphism import GraphMatcher

    gm = GraphMatcher(oracles.nx_graph(h.n, h.edges), oracles.nx_graph(p.n, p.edges))
    assert (find_subgraph(p, h) is not None) == gm.subgraph_is_monomorphic()


def test_find_subgraph_on_block_hosts():
    from chordram.formats import parse_graph_spec

    host = complete_multipartite(6, 6, 1)
    assert find_subgraph(parse_graph_spec("C12+0-6+3-9"), host) is None
    assert find_subgraph(parse_graph_spec("C13+0-2"), host) is not None
