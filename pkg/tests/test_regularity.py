import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chordram.errors import CapacityError, FloorError, InvalidInput, ParityError
from chordram.graph import SimpleGraph
from chordram.regularity import (
    AnchoredPathSpec,
    ChunkAllocation,
    ClusterChain,
    allocate_chunks,
    allocation_feasible,
    chain_path_embed,
    chain_violations,
    density,
    pair_path_embed,
    regularity_check,
    typical_vertices,
)
from chordram.synthetic import random_bipartite_pair, random_chain

from oracles import allocation_exists, brute_density, brute_max_deviation


def complete_bipartite(a, b):
    n = max(max(a), max(b)) + 1
    return SimpleGraph(n, frozenset((min(x, y), max(x, y)) for x in a for y in b))


def alternates(path, x1, x2):
    return all((v in x1) == (i % 2 == 0) and (v in x2) == (i % 2 == 1) for i, v in enumerate(path))


# density


def test_density_examples():
    a, b = range(5), range(5, 9)
    assert density(complete_bipartite(a, b), a, b) == 1
    assert density(SimpleGraph(9), a, b) == 0
    k4 = SimpleGraph(4, frozenset({(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)}))
    assert density(k4, [0, 1], [2, 3]) == 1


def test_density_rejects_bad_sets():
    g = SimpleGraph(4)
    with pytest.raises(InvalidInput):
        density(g, [], [1])
    with pytest.raises(InvalidInput):
        density(g, [0, 1], [1, 2])


@given(st.integers(2, 8), st.integers(2, 8), st.integers(0, 10**6))
def test_density_matches_count(na, nb, seed):
    host, a, b = random_bipartite_pair(max(na, nb), 0.5, seed)
    a, b = a[:na], b[:nb]
    assert density(host, a, b) == brute_density(host.edges, a, b)


# regularity_check


def test_complete_pair_is_regular():
    a, b = range(6), range(6, 12)
    v = regularity_check(complete_bipartite(a, b), a, b, 0.2)
    assert v.regular and v.max_deviation == 0 and v.witness is None


def test_half_block_pair_is_irregular():
    a, b = list(range(8)), list(range(8, 16))
    host = complete_bipartite(a[:4], b[:4])
    host = SimpleGraph(16, host.edges)
    v = regularity_check(host, a, b, 0.3)
    assert v.density == Fraction(1, 4)
    assert v.regular is False
    wa, wb = v.witness
    assert density(host, wa, wb) == 1
    assert v.max_deviation == pytest.approx(0.75)


@settings(max_examples=40)
@given(st.integers(1, 4), st.integers(1, 4), st.sampled_from([0.2, 0.3, 0.5, 0.75, 1.0]), st.integers(0, 10**6))
def test_exact_mode_matches_enumeration(na, nb, eps, seed):
    rng = random.Random(seed)
    a, b = list(range(na)), list(range(na, na + nb))
    edges = frozenset((x, y) for x in a for y in b if rng.random() < 0.5)
    v = regularity_check(SimpleGraph(na + nb, edges), a, b, eps)
    best = brute_max_deviation(edges, a, b, eps)
    assert v.max_deviation == pytest.approx(float(best))
    assert v.regular == (best < eps)


def test_sampled_mode_on_random_pair():
    host, a, b = random_bipartite_pair(200, 0.5, seed=0)
    v = regularity_check(host, a, b, 0.1, "sampled", samples=10**4, seed=0)
    assert v.max_deviation < 0.1
    assert v.regular is None and v.samples == 10**4


def test_sampled_mode_refutes_block_pair():
    a, b = list(range(40)), list(range(40, 80))
    host = SimpleGraph(80, complete_bipartite(a[:20], b[:20]).edges)
    v = regularity_check(host, a, b, 0.2, "sampled", samples=500, seed=1)
    assert v.regular is False and v.witness is not None


def test_mode_errors():
    a, b = list(range(17)), list(range(17, 34))
    g = SimpleGraph(34)
    with pytest.raises(InvalidInput):
        regularity_check(g, a, b, 0.5)
    with pytest.raises(InvalidInput):
        regularity_check(g, a, b, 0.5, "sampled", samples=0)
    with pytest.raises(InvalidInput):
        regularity_check(g, a, b, 0.5, "psychic")
    with pytest.raises(InvalidInput):
        regularity_check(g, a, b, 0)


# typical_vertices


def test_typical_examples():
    a, b = list(range(5)), list(range(5, 10))
    assert typical_vertices(complete_bipartite(a, b), a, b, 0.1, 1.0) == set(a)
    host = SimpleGraph(10, complete_bipartite(a[1:], b).edges)
    assert typical_vertices(host, a, b, 0.1, float(density(host, a, b))) == set(a[1:])


def test_typical_count_on_regular_pair():
    eps = 0.1
    host, a, b = random_bipartite_pair(200, 0.5, seed=0)
    assert regularity_check(host, a, b, eps, "sampled", samples=2000, seed=0).regular is None
    d = float(density(host, a, b))
    assert len(typical_vertices(host, a, b, eps, d)) >= (1 - eps) * len(a)


def test_restricted_pairs_stay_regular():
    eps = 0.1
    root = eps ** 0.5
    host, a, b = random_bipartite_pair(200, 0.5, seed=3)
    d = float(density(host, a, b))
    rng = random.Random(3)
    for trial in range(10):
        sa = rng.sample(a, rng.randint(int(root * 200) + 1, 200))
        sb = rng.sample(b, rng.randint(int(root * 200) + 1, 200))
        v = regularity_check(host, sa, sb, root, "sampled", samples=300, seed=trial)
        assert v.max_deviation < root + 0.05
        assert float(v.density) >= d - eps


# pair_path_embed


def test_path_in_complete_pair():
    x1, x2 = list(range(10)), list(range(10, 20))
    host = complete_bipartite(x1, x2)
    p = pair_path_embed(host, x1, x2, 0, 10, 7)
    assert len(p) == 8 and p[0] == 0 and p[-1] == 10 and len(set(p)) == 8
    assert alternates(p, set(x1), set(x2))
    assert all(host.has_edge(u, v) for u, v in zip(p, p[1:]))


def test_single_edge_path():
    x1, x2 = [0, 1], [2, 3]
    host = SimpleGraph(4, frozenset({(0, 2)}))
    assert pair_path_embed(host, x1, x2, 0, 2, 1) == [0, 2]
    assert pair_path_embed(host, x1, x2, 1, 3, 1) is None


def test_long_path_in_random_pair():
    host, x1, x2 = random_bipartite_pair(200, 0.5, seed=11)
    v2 = next(v for v in x2 if host.degree(v) > 50)
    p = pair_path_embed(host, x1, x2, x1[0], v2, 151)
    assert p is not None and len(p) == 152 and len(set(p)) == 152
    assert alternates(p, set(x1), set(x2))
    assert all(host.has_edge(u, v) for u, v in zip(p, p[1:]))


def test_path_errors():
    x1, x2 = list(range(4)), list(range(4, 8))
    host = complete_bipartite(x1, x2)
    with pytest.raises(InvalidInput):
        pair_path_embed(host, x1, x2, 0, 4, 4)
    with pytest.raises(InvalidInput):
        pair_path_embed(host, x1, x2, 4, 0, 3)
    with pytest.raises(InvalidInput):
        pair_path_embed(host, x1, x1, 0, 1, 3)
    with pytest.raises(InvalidInput):
        pair_path_embed(SimpleGraph(8), x1, x2, 0, 4, 3, min_deg_fraction=0.5)


@given(st.integers(3, 12), st.sampled_from([0.3, 0.6, 0.9]), st.integers(0, 10**6),
       st.integers(0, 6), st.sets(st.integers(0, 23), max_size=6))
def test_path_alternates_and_avoids_forbidden(size, p, seed, half, forbidden):
    host, x1, x2 = random_bipartite_pair(size, p, seed)
    length = 2 * half + 1
    forbidden -= {x1[0], x2[0]}
    path = pair_path_embed(host, x1, x2, x1[0], x2[0], length, forbidden=forbidden)
    if path is not None:
        assert len(path) == length + 1 and len(set(path)) == len(path)
        assert alternates(path, set(x1), set(x2))
        assert not set(path) & forbidden
        assert all(host.has_edge(u, v) for u, v in zip(path, path[1:]))


# allocate_chunks


def test_allocation_examples():
    assert allocate_chunks([13], 4, 50, 0.01).q == ((1, 11, 1),)
    assert allocate_chunks([19], 6, 50, 0.01).q == ((1, 9, 1, 7, 1),)


def test_allocation_errors():
    with pytest.raises(ParityError):
        allocate_chunks([13], 5, 50, 0.01)
    with pytest.raises(ParityError):
        allocate_chunks([14], 4, 50, 0.01)
    with pytest.raises(FloorError):
        allocate_chunks([7], 6, 50, 0.01)
    with pytest.raises(CapacityError):
        allocate_chunks([401], 4, 150, 0.0015)
    with pytest.raises(InvalidInput):
        allocate_chunks([], 4, 50, 0.01)


def _random_instance(rng, small):
    ell = rng.choice([4, 6, 8])
    k = rng.randint(1, 3 if small else 6)
    size = rng.randint(4, 20 if small else 200)
    eps = rng.choice([0.0001, 0.0015, 0.01, 0.05])
    if small:
        hi = 2 * ell + 9
    else:
        # aim the total near the capacity of the even pairs
        hi = max(2 * ell - 1, int(1.2 * (ell // 2 - 1) * 2 * size / k))
    lengths = [rng.randrange(2 * ell - 3, max(2 * ell - 2, hi), 2) for _ in range(k)]
    return lengths, ell, size, eps


def test_allocation_on_random_instances():
    rng = random.Random(2024)
    feasible = infeasible = rebalanced = 0
    while feasible < 1000:
        lengths, ell, size, eps = _random_instance(rng, small=False)
        if not allocation_feasible(lengths, ell, size, eps):
            infeasible += 1
            with pytest.raises(CapacityError):
                allocate_chunks(lengths, ell, size, eps)
            continue
        feasible += 1
        alloc = allocate_chunks(lengths, ell, size, eps)
        assert alloc.violations(lengths) == []
        assert all(x % 2 == 1 for row in alloc.q for x in row)
        assert [sum(r) for r in alloc.q] == lengths
        rebalanced += alloc.moves > 0
    assert infeasible > 0 and rebalanced > 0


def test_feasibility_matches_exhaustive_search():
    rng = random.Random(7)
    seen = {True: 0, False: 0}
    for _ in range(400):
        lengths, ell, size, eps = _random_instance(rng, small=True)
        cap = 2 * (1 - 2 * eps ** 0.25) * size
        want = allocation_exists(lengths, ell, cap)
        assert allocation_feasible(lengths, ell, size, eps) == want, (lengths, ell, size, eps)
        seen[want] += 1
    assert seen[True] and seen[False]


def test_balanced_rows_are_leftmost_heavy():
    alloc = allocate_chunks([31], 8, 100, 0.01)
    (row,) = alloc.q
    evens = row[1::2]
    assert evens == tuple(sorted(evens, reverse=True)) and max(evens) - min(evens) <= 2


# chain_path_embed


def complete_chain(ell, size):
    edges = set()
    for j in range(ell - 1):
        edges |= {(j * size + a, (j + 1) * size + b) for a in range(size) for b in range(size)}
    return ClusterChain(SimpleGraph(ell * size, frozenset(edges)),
                        tuple(range(j * size, (j + 1) * size) for j in range(ell)))


def test_chain_on_complete_layers():
    chain = complete_chain(4, 50)
    specs = [AnchoredPathSpec(13, 0, 150)]
    alloc = allocate_chunks([13], 4, 50, 0.01)
    emb = chain_path_embed(chain, specs, alloc, 0.01)
    assert chain_violations(chain, specs, alloc, emb) == []
    p = emb.paths[0]
    seg = p[1:13]
    assert len(seg) - 1 == 11
    assert alternates(seg, set(chain.cluster(2)), set(chain.cluster(3)))


def test_chain_on_random_layers():
    eps = 0.0015
    chain = random_chain(6, 150, 0.5, seed=5)
    host = chain.host
    v1, v2, v5, v6 = chain.cluster(1), chain.cluster(2), chain.cluster(5), chain.cluster(6)
    starts = sorted(typical_vertices(host, v1, v2, eps, float(density(host, v1, v2))))
    ends = sorted(typical_vertices(host, v6, v5, eps, float(density(host, v6, v5))))
    lengths = [19, 21, 19]
    specs = [AnchoredPathSpec(p, s, t) for p, s, t in zip(lengths, starts, ends)]
    alloc = allocate_chunks(lengths, 6, 150, eps)
    emb = chain_path_embed(chain, specs, alloc, eps)
    assert chain_violations(chain, specs, alloc, emb) == []
    assert [len(p) - 1 for p in emb.paths] == lengths
    inner = [v for p in emb.paths for v in p[1:-1]]
    assert len(inner) == len(set(inner))


def test_chain_rejects_capacity_violation_before_work():
    chain = complete_chain(4, 150)
    specs = [AnchoredPathSpec(401, 0, 450)]
    alloc = ChunkAllocation(((1, 399, 1),), 4, 150, 0.0015)
    with pytest.raises(CapacityError):
        chain_path_embed(chain, specs, alloc, 0.0015)


def test_chain_rejects_atypical_anchor():
    chain = complete_chain(4, 50)
    host = SimpleGraph(chain.host.n, frozenset(e for e in chain.host.edges if 0 not in e))
    chain = ClusterChain(host, chain.clusters)
    alloc = allocate_chunks([13], 4, 50, 0.01)
    with pytest.raises(InvalidInput):
        chain_path_embed(chain, [AnchoredPathSpec(13, 0, 150)], alloc, 0.01)


def test_chain_type_errors():
    g = SimpleGraph(10)
    with pytest.raises(InvalidInput):
        ClusterChain(g, ((0, 1),))
    with pytest.raises(InvalidInput):
        ClusterChain(g, ((0, 1), (1, 2), (3, 4)))
    with pytest.raises(InvalidInput):
        ClusterChain(g, ((0, 1), (2,)))
    with pytest.raises(InvalidInput):
        AnchoredPathSpec(4, 0, 1)
    with pytest.raises(InvalidInput):
        AnchoredPathSpec(5, 0, 0)
