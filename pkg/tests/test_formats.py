import json

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chordram.errors import InvalidInput
from chordram.formats import (
    bits_to_hex,
    chords_from_json,
    chords_to_json,
    format_shorthand,
    from_graph6,
    graph_from_json,
    graph_to_json,
    hex_to_bits,
    parse_graph_spec,
    to_graph6,
)
from chordram.graph import ChordSet, SimpleGraph, build_chorded_cycle, cycle_graph

import oracles
from strategies import chorded_cycles, graphs


@given(graphs(max_n=70))
def test_graph6_matches_networkx(g):
    ours = to_graph6(g)
    theirs = nx.to_graph6_bytes(oracles.nx_graph(g.n, g.edges), header=False).decode().strip()
    assert ours == theirs
    assert from_graph6(ours) == g


def test_graph6_large_n_header():
    g = cycle_graph(100)
    s = to_graph6(g)
    assert s[0] == "~"
    assert from_graph6(s) == g
    back = nx.from_graph6_bytes(s.encode())
    assert {tuple(sorted(e)) for e in back.edges()} == set(g.edges)


def test_graph6_known_strings():
    assert to_graph6(SimpleGraph(0)) == "?"
    assert to_graph6(cycle_graph(5)) == "Dhc"


@pytest.mark.parametrize("bad", ["D", "Dh", "Dhc!", ""])
def test_graph6_rejects_garbage(bad):
    with pytest.raises(InvalidInput):
        from_graph6(bad)


@given(graphs(max_n=12))
def test_graph_json_round_trip(g):
    assert graph_from_json(json.loads(json.dumps(graph_to_json(g)))) == g


@given(chorded_cycles())
def test_chord_json_and_shorthand_round_trip(g):
    from chordram.graph import chords_of

    d = chords_of(g)
    assert chords_from_json(chords_to_json(d)) == d
    assert parse_graph_spec(format_shorthand(g)) == g


def test_parse_graph_spec_forms(tmp_path):
    g = build_chorded_cycle(6, ChordSet.of(6, [(0, 3)]))
    assert parse_graph_spec("C6+0-3") == g
    assert parse_graph_spec(json.dumps({"n": 6, "chords": [[0, 3]]})) == g
    assert parse_graph_spec(json.dumps(graph_to_json(g))) == g
    f = tmp_path / "g.json"
    f.write_text(json.dumps(graph_to_json(g)))
    assert parse_graph_spec(str(f)) == g
    assert parse_graph_spec(to_graph6(g)) == g


@pytest.mark.parametrize("bad", ["C6+0-1", "C6+0-3+3-0", "{not json", "missing.json"])
def test_parse_graph_spec_errors(bad):
    with pytest.raises(InvalidInput):
        parse_graph_spec(bad)


def test_shorthand_of_non_cycle_is_none():
    assert format_shorthand(SimpleGraph(4, frozenset({(0, 1)}))) is None


@given(st.lists(st.integers(0, 1), max_size=60))
def test_hex_round_trip(bits):
    assert hex_to_bits(bits_to_hex(bits), len(bits)) == bits


def test_hex_rejects_padding_and_length():
    with pytest.raises(InvalidInput):
        hex_to_bits("f", 3)
    with pytest.raises(InvalidInput):
        hex_to_bits("ff", 3)
