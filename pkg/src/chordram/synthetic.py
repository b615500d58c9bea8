"""Seeded instance generators: chorded cycles and dense cluster chains."""

from __future__ import annotations

import random

from .graph import ChordSet, SimpleGraph, almost_bipartite_index, build_chorded_cycle, is_bipartite
from .regularity import AnchoredPathSpec, ClusterChain, allocation_feasible, density, typical_vertices


def random_bipartite_pair(size: int, p: float, seed: int) -> tuple[SimpleGraph, list[int], list[int]]:
    """G(size, size, p) on A = 0..size-1 and B = size..2size-1."""
    rng = random.Random(seed)
    edges = {(a, size + b) for a in range(size) for b in range(size) if rng.random() < p}
    return SimpleGraph(2 * size, frozenset(edges)), list(range(size)), list(range(size, 2 * size))


def random_chain(ell: int, size: int, p: float, seed: int) -> ClusterChain:
    """V_j = {(j-1)size, ..., j size - 1}; each consecutive pair is G(size, size, p)."""
    rng = random.Random(seed)
    edges = set()
    for j in range(ell - 1):
        lo, hi = j * size, (j + 1) * size
        edges.update((lo + a, hi + b) for a in range(size) for b in range(size) if rng.random() < p)
    host = SimpleGraph(ell * size, frozenset(edges))
    return ClusterChain(host, tuple(tuple(range(j * size, (j + 1) * size)) for j in range(ell)))


def random_path_specs(chain: ClusterChain, k: int, eps: float, seed: int) -> list[AnchoredPathSpec]:
    """k anchored odd paths meeting the length, total and capacity hypotheses.

    Anchors are drawn from the eps-typical vertices of V_1 (towards V_2) and
    V_ell (towards V_(ell-1)).
    """
    rng = random.Random(seed)
    ell, size = chain.ell, chain.size
    host = chain.host
    v1, v2 = chain.cluster(1), chain.cluster(2)
    vl, vl1 = chain.cluster(ell), chain.cluster(ell - 1)
    starts = sorted(typical_vertices(host, v1, v2, eps, float(density(host, v1, v2))))
    ends = sorted(typical_vertices(host, vl, vl1, eps, float(density(host, vl, vl1))) - set(starts))
    if len(starts) < k or len(ends) < k:
        raise ValueError("not enough typical anchors")
    a = rng.sample(starts, k)
    b = rng.sample(ends, k)
    budget = int((1 - 2 * eps ** 0.25) * (ell - 2) * size)
    lo = 3 * ell + 1
    hi = max(lo, budget // k)
    while True:
        lengths = [rng.randrange(lo, hi + 1) | 1 for _ in range(k)]
        if sum(lengths) <= budget and allocation_feasible(lengths, ell, size, eps):
            return [AnchoredPathSpec(p, s, t) for p, s, t in zip(lengths, a, b)]


def random_chorded_cycle(seed: int, n_range=(50, 2000), max_delta: int = 6, k_max: int = 3,
                         chord_ratio: int = 50) -> tuple[SimpleGraph, int]:
    """A chorded cycle with 1 <= |D| <= n / chord_ratio and maximum degree <= max_delta.

    Even n: every chord spans an odd distance, so the graph is bipartite.
    Odd n: an independent set S of 1..k_max cycle vertices is planted, the
    paths of C_n - S are 2-coloured with random flips, and each chord either
    joins two colour classes or leaves S; so G - S is bipartite and the index
    is at most |S|.  Returns (graph, its exact almost-bipartite index).
    """
    rng = random.Random(seed)
    while True:
        n = rng.randint(*n_range)
        nd = rng.randint(1, max(1, n // chord_ratio))
        colour = [v % 2 for v in range(n)]
        special: set[int] = set()
        if n % 2:
            t = rng.randint(1, k_max)
            while len(special) < t:
                v = rng.randrange(n)
                if not {v, (v - 1) % n, (v + 1) % n} & special:
                    special.add(v)
            start = min(special)
            c = rng.randrange(2)
            for step in range(1, n):
                v = (start + step) % n
                if v in special:
                    c = rng.randrange(2)
                else:
                    colour[v] = c
                    c ^= 1
        chords: set[tuple[int, int]] = set()
        deg = [2] * n
        tries = 0
        while len(chords) < nd and tries < 50 * nd:
            tries += 1
            u, v = rng.randrange(n), rng.randrange(n)
            e = (min(u, v), max(u, v))
            if (e[1] - e[0]) % n in (0, 1, n - 1) or e in chords:
                continue
            if u in special and v in special:
                continue
            if u not in special and v not in special and colour[u] == colour[v]:
                continue
            if deg[u] >= max_delta or deg[v] >= max_delta:
                continue
            chords.add(e)
            deg[u] += 1
            deg[v] += 1
        if not chords:
            continue
        g = build_chorded_cycle(n, ChordSet.of(n, sorted(chords)))
        if n % 2 == 0:
            assert is_bipartite(g)
            return g, 0
        ab = almost_bipartite_index(g, k_max)
        assert ab is not None
        return g, ab.k
