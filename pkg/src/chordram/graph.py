"""Graphs on vertices 0..n-1, chorded cycles, subgraph search and the
bipartite / k-almost-bipartite classifiers.

Adjacency is kept as Python integers used as bitsets; vertex ``v`` is bit
``1 << v``.  All objects are immutable once built.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BudgetExceeded, InvalidInput

DEFAULT_K_MAX = 8


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInput("vertex count must be nonnegative")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise InvalidInput(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInput(f"edge {e} out of range for n={self.n}")
            norm.add(_pair(int(u), int(v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "SimpleGraph":
        n = len(masks)
        return cls(n, frozenset((u, v) for u in range(n) for v in iter_bits(masks[u] >> (u + 1) << (u + 1))))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        m = [0] * self.n
        for u, v in self.edges:
            m[u] |= 1 << v
            m[v] |= 1 << u
        return tuple(m)

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(iter_bits(m)) for m in self.masks)

    def degree(self, v: int) -> int:
        return self.masks[v].bit_count()

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(m.bit_count() for m in self.masks)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    def num_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @cached_property
    def support(self) -> frozenset:
        """Vertices incident to at least one edge."""
        return frozenset(v for v in range(self.n) if self.masks[v])

    def complement(self) -> "SimpleGraph":
        full = (1 << self.n) - 1
        return SimpleGraph.from_masks([full & ~m & ~(1 << v) for v, m in enumerate(self.masks)])

    def remove_vertices(self, vs: Iterable[int]) -> "SimpleGraph":
        """Same vertex labels; the given vertices become isolated."""
        s = set(vs)
        return SimpleGraph(self.n, frozenset(e for e in self.edges if e[0] not in s and e[1] not in s))

    def edge_union(self, other_edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        return SimpleGraph(self.n, self.edges | {_pair(u, v) for u, v in other_edges})

    def edge_difference(self, other_edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        return SimpleGraph(self.n, self.edges - {_pair(u, v) for u, v in other_edges})

    def relabel(self, mapping: Sequence[int], n: int | None = None) -> "SimpleGraph":
        return SimpleGraph(self.n if n is None else n, frozenset(_pair(mapping[u], mapping[v]) for u, v in self.edges))

    @cached_property
    def components(self) -> tuple[frozenset, ...]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            comps.append(frozenset(comp))
        return tuple(comps)

    def is_connected(self) -> bool:
        return len(self.components) <= 1


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise InvalidInput("a cycle needs at least 3 vertices")
    return SimpleGraph(n, frozenset(_pair(i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, frozenset((i, i + 1) for i in range(n - 1)))


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def complete_multipartite(*sizes: int) -> SimpleGraph:
    label = []
    for part, s in enumerate(sizes):
        label += [part] * s
    n = len(label)
    return SimpleGraph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n) if label[u] != label[v]))


@dataclass(frozen=True)
class ChordSet:
    n: int
    chords: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 3:
            raise InvalidInput("cycle length must be at least 3")
        norm = set()
        for c in self.chords:
            u, v = (int(x) for x in c)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInput(f"chord {c} out of range for C_{self.n}")
            if (u - v) % self.n in (0, 1, self.n - 1):
                raise InvalidInput(f"{c} is not a chord of C_{self.n}")
            p = _pair(u, v)
            if p in norm:
                raise InvalidInput(f"repeated chord {p}")
            norm.add(p)
        object.__setattr__(self, "chords", frozenset(norm))

    @classmethod
    def of(cls, n: int, chords: Iterable[Sequence[int]] = ()) -> "ChordSet":
        chords = list(chords)
        seen = set()
        for c in chords:
            p = _pair(int(c[0]), int(c[1]))
            if p in seen:
                raise InvalidInput(f"repeated chord {p}")
            seen.add(p)
        return cls(n, frozenset(seen))

    def __len__(self):
        return len(self.chords)

    @property
    def endpoints(self) -> frozenset:
        return frozenset(v for c in self.chords for v in c)


def build_chorded_cycle(n: int, chords: ChordSet | Iterable[Sequence[int]] = ()) -> SimpleGraph:
    """C_n on 0-1-...-(n-1)-0 together with the given chords."""
    if not isinstance(chords, ChordSet):
        chords = ChordSet.of(n, chords)
    elif chords.n != n:
        raise InvalidInput(f"chord set is for C_{chords.n}, not C_{n}")
    return SimpleGraph(n, cycle_graph(n).edges | chords.chords)


def chords_of(g: SimpleGraph) -> ChordSet:
    """Recover the chord set of a graph containing the canonical cycle."""
    cyc = cycle_graph(g.n).edges
    if not cyc <= g.edges:
        raise InvalidInput("graph does not contain the canonical Hamiltonian cycle")
    return ChordSet(g.n, g.edges - cyc)


@dataclass(frozen=True)
class VertexPartition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        if len(parts) not in (2, 3):
            raise InvalidInput("a partition has 2 or 3 parts")
        seen = set()
        for p in parts:
            if seen & p:
                raise InvalidInput("parts must be disjoint")
            seen |= p
        object.__setattr__(self, "parts", parts)

    @property
    def domain(self) -> frozenset:
        return frozenset().union(*self.parts)

    def part_of(self, v: int) -> int | None:
        for i, p in enumerate(self.parts):
            if v in p:
                return i
        return None

    def is_proper(self, g: SimpleGraph) -> bool:
        for u, v in g.edges:
            pu = self.part_of(u)
            if pu is not None and pu == self.part_of(v):
                return False
        return True

    def restrict(self, vertices: Iterable[int]) -> "VertexPartition":
        vs = frozenset(vertices)
        return VertexPartition(tuple(p & vs for p in self.parts))


@dataclass(frozen=True)
class Embedding:
    """Injective map pattern vertex ``i`` -> host vertex ``mapping[i]``."""

    mapping: tuple

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(int(x) for x in self.mapping))

    def __getitem__(self, v: int) -> int:
        return self.mapping[v]

    def is_valid(self, pattern: SimpleGraph, host: SimpleGraph) -> bool:
        m = self.mapping
        if len(m) != pattern.n or len(set(m)) != len(m):
            return False
        if any(not (0 <= x < host.n) for x in m):
            return False
        return all(host.has_edge(m[u], m[v]) for u, v in pattern.edges)


# ---------------------------------------------------------------- bipartite


def _two_colour(g: SimpleGraph, within: frozenset | None = None):
    """BFS 2-colouring; returns (colour dict, None) or (None, conflict edge + parents)."""
    allowed = (1 << g.n) - 1
    if within is not None:
        allowed = sum(1 << v for v in within)
    colour: dict[int, int] = {}
    parent: dict[int, int] = {}
    depth: dict[int, int] = {}
    for s in range(g.n):
        if not allowed >> s & 1 or s in colour:
            continue
        colour[s] = 0
        parent[s] = -1
        depth[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in iter_bits(g.masks[u] & allowed):
                if w not in colour:
                    colour[w] = 1 - colour[u]
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    q.append(w)
                elif colour[w] == colour[u]:
                    return None, (u, w, parent, depth)
    return colour, None


def _cycle_from_conflict(u, w, parent, depth):
    pu, pw = [u], [w]
    a, b = u, w
    while depth[a] > depth[b]:
        a = parent[a]
        pu.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        pw.append(b)
    while a != b:
        a = parent[a]
        b = parent[b]
        pu.append(a)
        pw.append(b)
    # pu ends at lca, pw ends at lca
    return pu + pw[-2::-1]


def _odd_cycle(g: SimpleGraph, allowed: int, roots=None) -> list[int] | None:
    colour, conflict = _two_colour(g, frozenset(iter_bits(allowed)))
    if conflict is None:
        return None
    best = _cycle_from_conflict(*conflict)
    if roots is None:
        order = sorted(iter_bits(allowed), key=lambda v: (-g.degrees[v], v))
    else:
        order = sorted(best)
    for s in order:
        if len(best) == 3:
            break
        limit = (len(best) - 1) // 2  # only cycles of length < len(best) matter
        depth = {s: 0}
        parent = {s: -1}
        frontier = [s]
        d = 0
        found = None
        while frontier and d < limit and found is None:
            nxt = []
            for u in frontier:
                for w in iter_bits(g.masks[u] & allowed):
                    if w not in depth:
                        depth[w] = d + 1
                        parent[w] = u
                        nxt.append(w)
            # same-layer edges close odd walks of length 2(d+1)+1 through s
            layer = set(nxt)
            for u in nxt:
                for w in iter_bits(g.masks[u] & allowed):
                    if w in layer and w > u:
                        found = (u, w)
                        break
                if found:
                    break
            frontier = nxt
            d += 1
        if found is not None:
            cyc = _cycle_from_conflict(found[0], found[1], parent, depth)
            if len(cyc) < len(best):
                best = cyc
    return best


def shortest_odd_cycle(g: SimpleGraph, within: Iterable[int] | None = None) -> list[int] | None:
    """A shortest odd cycle (vertex list), or None if the graph is bipartite.

    BFS from every vertex with the search depth capped by the best cycle
    found so far.
    """
    allowed = (1 << g.n) - 1 if within is None else sum(1 << v for v in within)
    return _odd_cycle(g, allowed)


def bipartition(g: SimpleGraph, *, within: Iterable[int] | None = None, with_witness: bool = False):
    """Proper 2-part partition of ``g`` (restricted to ``within``), or None.

    With ``with_witness`` returns ``(partition_or_None, odd_cycle_or_None)``,
    the witness being a shortest odd cycle.
    """
    dom = None if within is None else frozenset(within)
    colour, conflict = _two_colour(g, dom)
    if colour is None:
        if with_witness:
            return None, shortest_odd_cycle(g, dom)
        return None
    part = VertexPartition((
        frozenset(v for v, c in colour.items() if c == 0),
        frozenset(v for v, c in colour.items() if c == 1),
    ))
    return (part, None) if with_witness else part


def is_bipartite(g: SimpleGraph) -> bool:
    return _two_colour(g)[1] is None


def is_independent(g: SimpleGraph, vs: Iterable[int]) -> bool:
    mask = 0
    for v in vs:
        mask |= 1 << v
    return all(not (g.masks[v] & mask) for v in iter_bits(mask))


# ------------------------------------------------------ k-almost bipartite


@dataclass(frozen=True)
class AlmostBipartite:
    k: int
    witness: frozenset


def _chain_reduction(g: SimpleGraph):
    """Shorten long induced paths of degree-2 vertices, keeping cycle parity.

    A chain with L >= 5 interior vertices is replaced by 3 or 4 of them
    (same parity).  Returns the reduced graph on the original labels plus
    the set of kept vertices.  The representatives are the two interior
    vertices next to the chain ends and deep interior vertices, whose
    original neighbours are never kept, so independence transfers back.
    """
    deg = g.degrees
    kept = {v for v in range(g.n) if deg[v] != 2}
    for comp in g.components:
        if not (comp & kept):
            kept.add(min(comp))
    edges = set()
    seen_chain = set()
    for u in sorted(kept):
        for w0 in g.adj[u]:
            if w0 in kept:
                edges.add(_pair(u, w0))
                continue
            interior = []
            prev, cur = u, w0
            while cur not in kept:
                interior.append(cur)
                a, b = g.adj[cur]
                prev, cur = cur, (b if a == prev else a)
            key = frozenset(interior)
            if key in seen_chain:
                continue
            seen_chain.add(key)
            L = len(interior)
            if L <= 4:
                rep = interior
            elif L % 2:
                rep = [interior[0], interior[2], interior[-1]]
            else:
                rep = [interior[0], interior[2], interior[3], interior[-1]]
            seq = [u] + rep + [cur]
            for a, b in zip(seq, seq[1:]):
                edges.add(_pair(a, b))
            kept.update(rep)
    return SimpleGraph(g.n, frozenset(edges)), frozenset(kept)


def _chain_dominants(red: SimpleGraph, kept: frozenset) -> dict[int, int]:
    """Map each vertex of a degree-2 chain to one chain vertex with no
    neighbour outside the chain, when such a vertex exists.

    A minimum transversal never holds two vertices of one chain, and swapping
    its chain vertex for that one keeps it independent and the rest
    bipartite, so the search only needs to branch on it.
    """
    deg2 = {v for v in kept if red.degrees[v] == 2}
    out: dict[int, int] = {}
    seen: set[int] = set()
    for v in sorted(deg2):
        if v in seen:
            continue
        comp, stack = {v}, [v]
        while stack:
            for w in red.adj[stack.pop()]:
                if w in deg2 and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        deep = [u for u in comp if all(w in comp for w in red.adj[u])]
        if deep:
            rep = min(deep)
            for u in comp:
                out[u] = rep
    return out


def almost_bipartite_index(g: SimpleGraph, k_max: int = DEFAULT_K_MAX) -> AlmostBipartite | None:
    """Least k <= k_max with an independent k-set S such that G - S is bipartite.

    Iterative deepening on k.  Every valid S meets every odd cycle of
    G - S' for S' a subset of S, so each level branches on the vertices of
    one short odd cycle of the current remainder.
    """
    if k_max < 0:
        raise InvalidInput("k_max must be nonnegative")
    if is_bipartite(g):
        return AlmostBipartite(0, frozenset())
    red, kept = _chain_reduction(g)
    masks = red.masks
    kept_mask = sum(1 << v for v in kept)
    dominant = _chain_dominants(red, kept)
    failed: set = set()

    def search(chosen: frozenset, chosen_mask: int, left: int):
        if (chosen, left) in failed:
            return None
        # any odd cycle is a valid branching set; short ones branch less
        cyc = _odd_cycle(red, kept_mask & ~chosen_mask, roots="cycle")
        if cyc is None:
            return chosen
        if left == 0:
            failed.add((chosen, left))
            return None
        for v in sorted({dominant.get(v, v) for v in cyc}):
            if masks[v] & chosen_mask:
                continue
            res = search(chosen | {v}, chosen_mask | (1 << v), left - 1)
            if res is not None:
                return res
        failed.add((chosen, left))
        return None

    for k in range(1, k_max + 1):
        res = search(frozenset(), 0, k)
        if res is not None:
            assert is_bipartite(g.remove_vertices(res)) and is_independent(g, res)
            return AlmostBipartite(k, frozenset(res))
    return None


# --------------------------------------------------------- subgraph search


def _search_order(pattern: SimpleGraph) -> list[int]:
    """Connectivity-respecting order: most already-placed neighbours first,
    then higher degree, then lower label."""
    n = pattern.n
    order: list[int] = []
    placed = 0
    deg = pattern.degrees
    remaining = set(range(n))
    while remaining:
        frontier = [v for v in remaining if pattern.masks[v] & placed]
        if not frontier:
            v = min(remaining, key=lambda x: (-deg[x], x))
        else:
            v = min(frontier, key=lambda x: (-(pattern.masks[x] & placed).bit_count(), -deg[x], x))
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)
    return order


def _component_info(g: SimpleGraph):
    size = [0] * g.n
    odd = [False] * g.n
    for comp in g.components:
        bip = _two_colour(g, comp)[1] is None
        for v in comp:
            size[v] = len(comp)
            odd[v] = not bip
    return size, odd


def twin_classes(g: SimpleGraph) -> list[int]:
    """Class label per vertex for the relation N(u) - v == N(v) - u.

    Swapping two twins is an automorphism fixing everything else.
    """
    by_open: dict[int, list[int]] = {}
    by_closed: dict[int, list[int]] = {}
    for v, m in enumerate(g.masks):
        by_open.setdefault(m, []).append(v)
        by_closed.setdefault(m | 1 << v, []).append(v)
    label = list(range(g.n))
    for groups in (by_open, by_closed):
        for vs in groups.values():
            if len(vs) > 1:
                for v in vs:
                    label[v] = vs[0]
    return label


def find_subgraph(pattern: SimpleGraph, host: SimpleGraph, *, node_limit: int | None = None) -> Embedding | None:
    """Find a (not necessarily induced) copy of ``pattern`` in ``host``.

    Backtracking over pattern vertices in a connectivity-respecting order of
    decreasing degree.  Host candidates are filtered by degree, by the size
    and bipartiteness of their component, and by adjacency to the images of
    already-placed neighbours; at each step only one unused vertex per host
    twin class is tried.  Deterministic: candidates are tried in increasing
    label order.
    """
    if pattern.n > host.n:
        return None
    if pattern.n == 0:
        return Embedding(())
    order = _search_order(pattern)
    pos = {v: i for i, v in enumerate(order)}
    back = [[pos[w] for w in pattern.adj[v] if pos[w] < i] for i, v in enumerate(order)]
    psize, podd = _component_info(pattern)
    hsize, hodd = _component_info(host)
    hdeg = host.degrees
    base = []
    for v in order:
        m = 0
        for h in range(host.n):
            if hdeg[h] >= pattern.degrees[v] and hsize[h] >= psize[v] and (hodd[h] or not podd[v]):
                m |= 1 << h
        base.append(m)
    hm = host.masks
    twin = twin_classes(host)
    k = len(order)
    image = [0] * k
    nodes = 0

    def extend(i: int, used: int) -> bool:
        nonlocal nodes
        if i == k:
            return True
        cand = base[i] & ~used
        for j in back[i]:
            cand &= hm[image[j]]
        tried = set()
        while cand:
            low = cand & -cand
            cand ^= low
            t = twin[low.bit_length() - 1]
            if t in tried:
                continue
            tried.add(t)
            nodes += 1
            if node_limit is not None and nodes > node_limit:
                raise BudgetExceeded("subgraph search node limit", {"nodes": nodes})
            image[i] = low.bit_length() - 1
            if extend(i + 1, used | low):
                return True
        return False

    if not extend(0, 0):
        return None
    mapping = [0] * pattern.n
    for i, v in enumerate(order):
        mapping[v] = image[i]
    emb = Embedding(tuple(mapping))
    assert emb.is_valid(pattern, host)
    return emb


def automorphisms(g: SimpleGraph) -> list[tuple[int, ...]]:
    """All automorphisms, by exhaustive backtracking (small graphs only)."""
    order = _search_order(g)
    pos = {v: i for i, v in enumerate(order)}
    back = [[pos[w] for w in g.adj[v] if pos[w] < i] for i, v in enumerate(order)]
    nonback = [[pos[w] for w in range(g.n) if w != v and pos[w] < i and not g.has_edge(v, w)] for i, v in enumerate(order)]
    out = []
    image = [0] * g.n
    deg = g.degrees

    def extend(i, used):
        if i == g.n:
            mapping = [0] * g.n
            for j, v in enumerate(order):
                mapping[v] = image[j]
            out.append(tuple(mapping))
            return
        v = order[i]
        cand = ((1 << g.n) - 1) & ~used
        for j in back[i]:
            cand &= g.masks[image[j]]
        for j in nonback[i]:
            cand &= ~g.masks[image[j]]
        for h in iter_bits(cand):
            if deg[h] == deg[v]:
                image[i] = h
                extend(i + 1, used | (1 << h))

    extend(0, 0)
    return out
