"""Hypothesis strategies for small graphs and chorded cycles."""

import itertools

from hypothesis import strategies as st

from chordram.graph import ChordSet, SimpleGraph, build_chorded_cycle


@st.composite
def graphs(draw, min_n=0, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return SimpleGraph(n, frozenset(chosen))


@st.composite
def chorded_cycles(draw, min_n=4, max_n=12, max_chords=4):
    n = draw(st.integers(min_n, max_n))
    cands = [(u, v) for u, v in itertools.combinations(range(n), 2) if (v - u) % n not in (1, n - 1)]
    chords = draw(st.lists(st.sampled_from(cands), unique=True, max_size=max_chords)) if cands else []
    return build_chorded_cycle(n, ChordSet.of(n, chords))


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(list(range(n))))
