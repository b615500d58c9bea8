import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chordram.canon import canonical_colouring_code
from chordram.coloring import BLUE, RED, ColoredCompleteGraph, mono_copy
from chordram.errors import InvalidInput
from chordram.extremal import (
    EVEN_MAXCUT,
    K_PART,
    ExtremalKind,
    bounded_colouring,
    certify_lower_bound,
    clique_blocks,
    even_extremal_coloring,
    k_almost_extremal_coloring,
    lower_bound,
    odd_extremal_coloring,
)
from chordram.formats import parse_graph_spec
from chordram.graph import almost_bipartite_index, complete_multipartite, cycle_graph
from chordram.ramsey import ramsey_number

import oracles
from strategies import graphs


def is_clique(g, vs):
    return all(g.has_edge(u, v) for u, v in itertools.combinations(sorted(vs), 2))


def test_even_construction_shape():
    c = even_extremal_coloring(6)
    assert c.N == 10
    comps = [c_ for c_ in c.red.components]
    assert sorted(len(x) for x in comps) == [5, 5]
    assert all(is_clique(c.red, x) for x in comps)
    assert c.blue == complete_multipartite(5, 5)


@pytest.mark.parametrize("n", [6, 8, 10, 12])
def test_even_red_is_two_cliques(n):
    red = even_extremal_coloring(n).red
    assert len(red.components) == 2
    assert all(len(x) == n - 1 and is_clique(red, x) for x in red.components)


def test_odd_construction_shape():
    c = odd_extremal_coloring(5)
    assert c.N == 9
    assert sorted(len(x) for x in c.red.components) == [1, 4, 4]
    apex = 8
    assert all(c.color(apex, v) == BLUE for v in range(8))
    assert almost_bipartite_index(c.blue).k == 1
    assert mono_copy(c, cycle_graph(5))[0] == BLUE


def test_k_part_shape():
    c = k_almost_extremal_coloring(9, 2)
    assert c.N == 18
    assert sorted(len(x) for x in c.red.components) == [2, 8, 8]
    assert c.blue == complete_multipartite(8, 8, 2)


def test_k_part_with_k1_is_odd_construction():
    a, b = k_almost_extremal_coloring(9, 1), odd_extremal_coloring(9)
    assert canonical_colouring_code(a.red.masks) == canonical_colouring_code(b.red.masks)


@pytest.mark.parametrize("n,k", [(5, 1), (5, 2), (7, 3), (9, 2), (9, 4)])
def test_blue_index_equals_k(n, k):
    c = k_almost_extremal_coloring(n, k)
    r = almost_bipartite_index(c.blue, k + 1)
    assert r.k == k
    assert r.witness == frozenset(range(2 * (n - 1), 2 * (n - 1) + k))


@pytest.mark.parametrize("kind,n,k", [(EVEN_MAXCUT, 5, 1), (EVEN_MAXCUT, 4, 1), (K_PART, 6, 1), (K_PART, 5, 0),
                                      (K_PART, 3, 3), ("nope", 5, 1)])
def test_construction_preconditions(kind, n, k):
    with pytest.raises(InvalidInput):
        ExtremalKind(kind, n, k)
    with pytest.raises(InvalidInput):
        odd_extremal_coloring(6)


def test_certificate_examples():
    c6_tri = parse_graph_spec("C6+0-2")
    cert = certify_lower_bound(even_extremal_coloring(6), c6_tri, "structural")
    assert cert["verdict"] is True
    assert "red" not in cert["red_reason"] or "5 < 6" in cert["red_reason"]
    cert = certify_lower_bound(even_extremal_coloring(6), cycle_graph(6), "structural")
    assert cert["verdict"] is False and cert["copy"][0] == BLUE
    h = parse_graph_spec("C13+0-2+3-5")
    assert certify_lower_bound(k_almost_extremal_coloring(13, 1), h, "structural")["verdict"] is True


def test_certificate_copies_are_real():
    for c, h in [(even_extremal_coloring(6), cycle_graph(6)), (odd_extremal_coloring(5), cycle_graph(5)),
                 (k_almost_extremal_coloring(5, 3), cycle_graph(4))]:
        cert = certify_lower_bound(c, h, "structural")
        colour, mapping = cert["copy"]
        sub = c.subgraph(colour)
        assert len(set(mapping)) == h.n
        assert all(sub.has_edge(mapping[u], mapping[v]) for u, v in h.edges)


def test_structural_mode_rejects_non_block_colourings():
    c = ColoredCompleteGraph.from_red_edges(4, [(0, 1), (1, 2)])
    with pytest.raises(InvalidInput):
        certify_lower_bound(c, cycle_graph(3), "structural")
    with pytest.raises(InvalidInput):
        certify_lower_bound(c, cycle_graph(3), "other")
    assert certify_lower_bound(c, cycle_graph(3), "search")["verdict"] is False


CONSTRUCTIONS = (
    [("even", n, 1) for n in (6, 8, 10)]
    + [("odd", n, 1) for n in (5, 7, 9)]
    + [("k", n, k) for n in (5, 7, 9) for k in range(1, 5) if 2 * (n - 1) + k <= 18 and k < n]
)
PATTERNS = ["C5", "C6", "C6+0-2", "C6+0-3", "C7+0-2", "C7+0-3", "C8+0-4", "C8+0-2+4-6", "C9+0-2+3-5",
            "C10+0-5", "C11+0-2+4-7", "C12+0-6+3-9", "C13+0-2+3-5"]


def _build(kind, n, k):
    if kind == "even":
        return even_extremal_coloring(n)
    if kind == "odd":
        return odd_extremal_coloring(n)
    return k_almost_extremal_coloring(n, k)


@pytest.mark.parametrize("kind,n,k", CONSTRUCTIONS)
def test_structural_and_search_modes_agree(kind, n, k):
    c = _build(kind, n, k)
    for spec in PATTERNS:
        h = parse_graph_spec(spec)
        s = certify_lower_bound(c, h, "structural")["verdict"]
        e = certify_lower_bound(c, h, "search")["verdict"]
        assert s == e, (kind, n, k, spec)


def test_certificate_implies_ramsey_bound():
    h = parse_graph_spec("C6+0-2")
    assert lower_bound(even_extremal_coloring(6), h) == 11
    assert ramsey_number(h, 14) > 10
    assert lower_bound(even_extremal_coloring(6), cycle_graph(6)) is None


def test_clique_blocks():
    assert sorted(map(len, clique_blocks(k_almost_extremal_coloring(5, 2)))) == [2, 4, 4]
    assert clique_blocks(ColoredCompleteGraph.from_red_edges(3, [(0, 1), (1, 2)])) is None


@given(graphs(max_n=7), st.lists(st.integers(0, 4), min_size=1, max_size=3))
def test_bounded_colouring_matches_enumeration(g, caps):
    col = bounded_colouring(g, caps)
    assert (col is not None) == oracles.brute_bounded_colouring(g.n, sorted(g.edges), caps)
    if col is not None:
        assert all(col[u] != col[v] for u, v in g.edges)
        assert all(col.count(i) <= c for i, c in enumerate(caps))
