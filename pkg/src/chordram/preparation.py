"""Splitting a chorded cycle into a small core plus long odd connectors.

Pipeline: extract_core -> parity_fix -> (even n) bipartite_path_alignment,
(odd n) a 3-colouring of the core followed by tripartite_augment.  The core
graphs are SimpleGraphs on all n labels; their vertex set is the set of
non-isolated vertices (``support``).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .errors import InvalidInput
from .formats import graph_from_json, graph_to_json
from .graph import (
    DEFAULT_K_MAX,
    SimpleGraph,
    VertexPartition,
    _pair,
    almost_bipartite_index,
    bipartition,
    chords_of,
    is_bipartite,
)


def connectors(g: SimpleGraph, core: SimpleGraph) -> list[list[int]]:
    """The V(core)-paths of g - E(core).

    Each path starts at its lower-numbered endpoint; the list is sorted by
    smallest vertex.  Raises InvalidInput if g - E(core) is not a union of
    such paths (a vertex off the core with degree other than 2, or a cycle
    avoiding the core).
    """
    anchors = core.support
    rest = [m for m in g.masks]
    for u, v in core.edges:
        rest[u] &= ~(1 << v)
        rest[v] &= ~(1 << u)
    seen_edges = set()
    paths = []
    covered = set()
    for a in sorted(anchors):
        m = rest[a]
        while m:
            low = m & -m
            m ^= low
            w = low.bit_length() - 1
            if _pair(a, w) in seen_edges:
                continue
            path = [a]
            prev, cur = a, w
            while True:
                seen_edges.add(_pair(prev, cur))
                path.append(cur)
                if cur in anchors:
                    break
                r = rest[cur]
                if r.bit_count() != 2:
                    raise InvalidInput(f"vertex {cur} off the core has degree {r.bit_count()} outside it")
                prev, cur = cur, (r & ~(1 << prev)).bit_length() - 1
            covered.update(path[1:-1])
            if path[-1] < path[0] or (path[-1] == path[0] and path[-2] < path[1]):
                path.reverse()
            paths.append(path)
    for v in range(g.n):
        if v not in anchors and v not in covered and rest[v]:
            raise InvalidInput(f"vertex {v} lies on a cycle that avoids the core")
    paths.sort(key=lambda p: (min(p), p))
    return paths


def _with_edges(core: SimpleGraph, edges) -> SimpleGraph:
    return SimpleGraph(core.n, core.edges | frozenset(_pair(*e) for e in edges))


def extract_core(g: SimpleGraph, z: float) -> SimpleGraph:
    """Chords plus every cycle arc of length <= z between consecutive chord ends."""
    if z < 1:
        raise InvalidInput("z must be at least 1")
    d = chords_of(g)
    n = g.n
    ends = sorted(d.endpoints)
    edges = set(d.chords)
    for i, a in enumerate(ends):
        b = ends[(i + 1) % len(ends)]
        length = (b - a) % n
        if length <= z:
            edges.update(_pair((a + t) % n, (a + t + 1) % n) for t in range(length))
    return SimpleGraph(n, frozenset(edges))


def parity_fix(core: SimpleGraph, g: SimpleGraph) -> SimpleGraph:
    """Move the first edge of every even connector into the core."""
    extra = []
    for p in connectors(g, core):
        if (len(p) - 1) % 2 == 0:
            extra.append((p[0], p[1]))
    return _with_edges(core, extra)


def bipartite_path_alignment(g: SimpleGraph, core: SimpleGraph) -> VertexPartition:
    """Restrict a bipartition of g to V(core); every connector then straddles it."""
    part = bipartition(g)
    if part is None:
        raise InvalidInput("host graph is not bipartite")
    for p in connectors(g, core):
        if (len(p) - 1) % 2 == 0:
            raise InvalidInput(f"even connector {p[0]}..{p[-1]} of length {len(p) - 1}")
    vs = core.support
    u1, u2 = part.parts
    if vs and min(vs) in u2:
        u1, u2 = u2, u1
    return VertexPartition((u1 & vs, u2 & vs))


def tripartite_augment(g: SimpleGraph, core: SimpleGraph, partition: VertexPartition, m: int):
    """Absorb the second and penultimate vertex of connectors touching U3.

    Returns (augmented core, 3-part partition).  Every connector of the
    result is an odd U1-U2 path of length >= m - 2, provided no connector of
    the input has both endpoints in U1 or both in U2.
    """
    if m < 3:
        raise InvalidInput("m must be at least 3")
    if len(partition.parts) != 3:
        raise InvalidInput("a 3-part partition is required")
    if partition.domain != core.support:
        raise InvalidInput("partition must cover exactly the core vertices")
    if not partition.is_proper(core):
        raise InvalidInput("partition is not proper on the core")
    paths = connectors(g, core)
    if len(paths) > len(core.support):
        raise InvalidInput("more connectors than core vertices")
    parts = [set(p) for p in partition.parts]
    extra = []
    for p in paths:
        length = len(p) - 1
        if length % 2 == 0 or length < m:
            raise InvalidInput(f"connector {p[0]}..{p[-1]} has length {length}; odd and >= {m} required")
        a, b, y, z = p[0], p[1], p[-2], p[-1]
        ca, cz = partition.part_of(a), partition.part_of(z)
        if ca != 2 and cz != 2:
            if ca == cz:
                raise InvalidInput(f"connector {a}..{z} has both ends in U{ca + 1}")
            continue
        if ca == 2 and cz == 2:
            parts[0].add(b)
            parts[1].add(y)
        elif ca == 2:
            parts[cz].add(b)
            parts[1 - cz].add(y)
        else:
            parts[ca].add(y)
            parts[1 - ca].add(b)
        extra += [(a, b), (y, z)]
    return _with_edges(core, extra), VertexPartition(tuple(frozenset(p) for p in parts))


def _connector_ok(pa, pz) -> bool:
    return pa == 2 or pz == 2 or pa != pz


def _witness_colouring(g: SimpleGraph, core: SimpleGraph, paths, k_max: int):
    """3-colouring of the core read off an odd cycle transversal of g.

    Transversal vertices inside a connector are moved to one of its
    endpoints (every cycle through the connector's interior passes both).
    """
    ab = almost_bipartite_index(g, k_max)
    if ab is None:
        raise InvalidInput(f"graph is not k-almost bipartite for any k <= {k_max}")
    s = set(ab.witness)
    for p in paths:
        inner = s.intersection(p[1:-1])
        if not inner:
            continue
        s -= inner
        if p[0] in s or p[-1] in s:
            continue
        for end in (p[0], p[-1]):
            if not any(w in s for w in g.adj[end]):
                s.add(end)
                break
        else:
            return None
    rest = g.remove_vertices(s)
    part = bipartition(rest, within=[v for v in range(g.n) if v not in s])
    if part is None:
        return None
    vs = core.support
    u1, u2 = part.parts
    if vs - s and min(vs - s) in u2:
        u1, u2 = u2, u1
    return VertexPartition((u1 & vs, u2 & vs, frozenset(s) & vs))


def _search_colouring(core: SimpleGraph, paths):
    """Backtracking 3-colouring of the core under the connector constraints."""
    vs = sorted(core.support)
    partners: dict[int, list[int]] = {v: [] for v in vs}
    for p in paths:
        partners[p[0]].append(p[-1])
        partners[p[-1]].append(p[0])
    order = []
    seen = set()
    for s in vs:
        if s in seen:
            continue
        queue = [s]
        seen.add(s)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(set(core.adj[v]) | set(partners[v])):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    colour: dict[int, int] = {}

    def rec(i):
        if i == len(order):
            return True
        v = order[i]
        for c in (0, 1, 2):
            if any(colour.get(w) == c for w in core.adj[v]):
                continue
            if any(w in colour and not _connector_ok(c, colour[w]) for w in partners[v]):
                continue
            colour[v] = c
            if rec(i + 1):
                return True
            del colour[v]
        return False

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(order) + 200))
    try:
        ok = rec(0)
    finally:
        sys.setrecursionlimit(old)
    if not ok:
        return None
    return VertexPartition(tuple(frozenset(v for v in vs if colour[v] == c) for c in range(3)))


def core_tripartition(g: SimpleGraph, core: SimpleGraph, k_max: int = DEFAULT_K_MAX) -> tuple[VertexPartition, str]:
    """Proper 3-colouring of the core with no connector inside U1 or inside U2.

    Tries the colouring induced by a transversal witness first, then an
    exhaustive search.  Returns (partition, source).
    """
    paths = connectors(g, core)
    part = _witness_colouring(g, core, paths, k_max)
    if part is not None and part.is_proper(core):
        if all(_connector_ok(part.part_of(p[0]), part.part_of(p[-1])) for p in paths):
            return part, "witness"
    part = _search_colouring(core, paths)
    if part is None:
        raise InvalidInput("no admissible 3-colouring of the core")
    return part, "search"


@dataclass
class PreparedDecomposition:
    core: SimpleGraph
    partition: VertexPartition | None
    connectors: list
    stage_sizes: dict
    z: float
    parity: str
    degenerate: bool = False
    flags: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "core": {
                "graph": graph_to_json(self.core),
                "partition": None if self.partition is None else [sorted(p) for p in self.partition.parts],
            },
            "connectors": [list(p) for p in self.connectors],
            "stage_sizes": dict(self.stage_sizes),
            "z": self.z,
            "parity": self.parity,
            "degenerate": self.degenerate,
            "flags": list(self.flags),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PreparedDecomposition":
        part = obj["core"]["partition"]
        return cls(
            core=graph_from_json(obj["core"]["graph"]),
            partition=None if part is None else VertexPartition(tuple(frozenset(p) for p in part)),
            connectors=[list(p) for p in obj["connectors"]],
            stage_sizes=dict(obj["stage_sizes"]),
            z=obj["z"],
            parity=obj["parity"],
            degenerate=obj.get("degenerate", False),
            flags=list(obj.get("flags", [])),
        )

    def violations(self, g: SimpleGraph) -> list[str]:
        """Every broken invariant, as text; empty when all hold."""
        if self.degenerate:
            return []
        out = []
        core, part = self.core, self.partition
        vs = core.support
        edges = set(core.edges)
        for p in self.connectors:
            pe = {_pair(a, b) for a, b in zip(p, p[1:])}
            if edges & pe:
                out.append(f"connector {p[0]}..{p[-1]} shares an edge")
            edges |= pe
            length = len(p) - 1
            if length % 2 == 0:
                out.append(f"connector {p[0]}..{p[-1]} has even length {length}")
            if length < self.z - 3:
                out.append(f"connector {p[0]}..{p[-1]} has length {length} < z-3")
            if p[0] not in part.parts[0] or p[-1] not in part.parts[1]:
                out.append(f"connector {p[0]}..{p[-1]} is not a U1-U2 path")
            if set(p[1:-1]) & vs:
                out.append(f"connector {p[0]}..{p[-1]} meets the core inside")
        inner = [v for p in self.connectors for v in p[1:-1]]
        if len(inner) != len(set(inner)):
            out.append("connectors are not internally disjoint")
        if edges != set(g.edges):
            out.append("core and connectors do not reproduce the graph")
        if part.domain != vs or not part.is_proper(core):
            out.append("partition is not a proper partition of the core")
        s = self.stage_sizes
        nd = len(chords_of(g))
        if s["H2"] > 2 * self.z * nd:
            out.append("|H''| > 2z|D|")
        if s["H1"] > 2 * s["H2"]:
            out.append("|H'| > 2|H''|")
        if s["H"] > 3 * s["H1"]:
            out.append("|H| > 3|H'|")
        if s["H"] != len(vs):
            out.append("recorded |H| does not match the core")
        return out


def prepare_host(g: SimpleGraph, z: float, k_max: int = DEFAULT_K_MAX) -> PreparedDecomposition:
    """Run the whole preparation on a chorded cycle g = C_n + D."""
    n = g.n
    parity = "even" if n % 2 == 0 else "odd"
    d = chords_of(g)
    if len(d) == 0:
        return PreparedDecomposition(SimpleGraph(n), None, [], {"H2": 0, "H1": 0, "H": 0}, z, parity, True,
                                     ["empty chord set: plain cycle, nothing to anchor"])
    h2 = extract_core(g, z)
    h1 = parity_fix(h2, g)
    flags = []
    if parity == "even":
        if not is_bipartite(g):
            raise InvalidInput("even n requires a bipartite chorded cycle")
        core, part = h1, bipartite_path_alignment(g, h1)
    else:
        paths = connectors(g, h1)
        part1, source = core_tripartition(g, h1, k_max)
        if source != "witness":
            flags.append("core 3-colouring found by search")
        if paths:
            m = min(len(p) - 1 for p in paths)
            if m < 3:
                raise InvalidInput("z too small: a connector is shorter than 3")
            core, part = tripartite_augment(g, h1, part1, m)
        else:
            core, part = h1, part1
    paths = connectors(g, core)
    oriented = []
    for p in paths:
        if p[0] in part.parts[1]:
            p = p[::-1]
        oriented.append(p)
    if not oriented:
        flags.append("no connector left: the whole graph is in the core")
    sizes = {"H2": len(h2.support), "H1": len(h1.support), "H": len(core.support)}
    return PreparedDecomposition(core, part, oriented, sizes, z, parity, False, flags)
