"""Lower-bound colourings built from cliques and their certificates.

Each construction colours K_N so that the red graph is a disjoint union of
cliques; the blue graph is then complete multipartite with those cliques as
classes.  Vertex labels: X = {0..n-2}, Y = {n-1..2n-3}, Z (or the apex)
after them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coloring import BLUE, RED, ColoredCompleteGraph, mono_copy
from .errors import InvalidInput
from .graph import Embedding, SimpleGraph

EVEN_MAXCUT = "even_maxcut"
ODD_MAXCUT_PLUS_VERTEX = "odd_maxcut_plus_vertex"
K_PART = "k_part"


def _from_blocks(sizes: list[int]) -> ColoredCompleteGraph:
    red = []
    start = 0
    for s in sizes:
        block = range(start, start + s)
        red += [(u, v) for u in block for v in block if u < v]
        start += s
    return ColoredCompleteGraph.from_red_edges(start, red)


@dataclass(frozen=True)
class ExtremalKind:
    kind: str
    n: int
    k: int = 1

    def __post_init__(self):
        if self.kind == EVEN_MAXCUT:
            if self.n % 2 or self.n <= 4:
                raise InvalidInput("even construction needs even n > 4")
        elif self.kind == ODD_MAXCUT_PLUS_VERTEX:
            if self.n % 2 == 0 or self.n <= 4:
                raise InvalidInput("odd construction needs odd n > 4")
        elif self.kind == K_PART:
            if self.n % 2 == 0:
                raise InvalidInput("k-part construction needs odd n")
            if self.k < 1:
                raise InvalidInput("k must be at least 1")
            if self.n <= self.k:
                raise InvalidInput("k-part construction needs n > k")
        else:
            raise InvalidInput(f"unknown construction {self.kind!r}")

    def build(self) -> ColoredCompleteGraph:
        if self.kind == EVEN_MAXCUT:
            return _from_blocks([self.n - 1, self.n - 1])
        if self.kind == ODD_MAXCUT_PLUS_VERTEX:
            return _from_blocks([self.n - 1, self.n - 1, 1])
        return _from_blocks([self.n - 1, self.n - 1, self.k])


def even_extremal_coloring(n: int) -> ColoredCompleteGraph:
    """K_{2(n-1)}: red inside two halves of size n-1, blue across."""
    return ExtremalKind(EVEN_MAXCUT, n).build()


def odd_extremal_coloring(n: int) -> ColoredCompleteGraph:
    """The even construction plus an apex whose edges are all blue."""
    return ExtremalKind(ODD_MAXCUT_PLUS_VERTEX, n).build()


def k_almost_extremal_coloring(n: int, k: int) -> ColoredCompleteGraph:
    """K_{2(n-1)+k}: red inside X, Y, Z with |X|=|Y|=n-1, |Z|=k; blue across."""
    return ExtremalKind(K_PART, n, k).build()


# ------------------------------------------------------------ certificates


def clique_blocks(c: ColoredCompleteGraph) -> list[list[int]] | None:
    """Red components if each is a clique, else None."""
    red = c.red
    blocks = []
    for comp in sorted(red.components, key=min):
        s = len(comp)
        if any(red.degree(v) != s - 1 for v in comp):
            return None
        blocks.append(sorted(comp))
    return blocks


def _pack_components(h: SimpleGraph, blocks: list[list[int]]) -> Embedding | None:
    """Place the components of h inside the cliques, each component in one clique."""
    comps = sorted((sorted(c) for c in h.components), key=lambda c: (-len(c), c))
    free = [len(b) for b in blocks]
    choice = [0] * len(comps)

    def rec(i):
        if i == len(comps):
            return True
        tried = set()
        for j, f in enumerate(free):
            if f >= len(comps[i]) and f not in tried:
                tried.add(f)
                free[j] -= len(comps[i])
                choice[i] = j
                if rec(i + 1):
                    return True
                free[j] += len(comps[i])
        return False

    if not rec(0):
        return None
    mapping = [0] * h.n
    used = [0] * len(blocks)
    for comp, j in zip(comps, choice):
        for v in comp:
            mapping[v] = blocks[j][used[j]]
            used[j] += 1
    return Embedding(mapping)


def bounded_colouring(h: SimpleGraph, capacities: list[int]) -> list[int] | None:
    """Proper colouring of h with class i of size at most capacities[i], or None.

    Exact backtracking; classes of equal capacity are interchangeable, so a
    fresh class is only opened at the first unused one of its capacity.
    """
    n = h.n
    if n > sum(capacities):
        return None
    order = []
    seen = set()
    for start in sorted(range(n), key=lambda v: (-h.degrees[v], v)):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop(0)
            order.append(v)
            for w in sorted(h.adj[v], key=lambda x: (-h.degrees[x], x)):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    colour = [-1] * n
    load = [0] * len(capacities)
    opened = [False] * len(capacities)

    def rec(i):
        if i == n:
            return True
        v = order[i]
        banned = {colour[w] for w in h.adj[v]}
        fresh_caps = set()
        for c, cap in enumerate(capacities):
            if c in banned or load[c] >= cap:
                continue
            if not opened[c]:
                if cap in fresh_caps:
                    continue
                fresh_caps.add(cap)
            was = opened[c]
            colour[v] = c
            load[c] += 1
            opened[c] = True
            if rec(i + 1):
                return True
            colour[v] = -1
            load[c] -= 1
            opened[c] = was
        return False

    return list(colour) if rec(0) else None


def certify_lower_bound(c: ColoredCompleteGraph, h: SimpleGraph, mode: str = "structural") -> dict:
    """Decide whether ``c`` avoids a monochromatic ``h`` and say why.

    Returns {"verdict", "mode", "red_reason", "blue_reason"} plus
    "copy" = [colour, mapping] when a copy exists.  In structural mode the
    red graph must be a disjoint union of cliques.
    """
    if mode == "search":
        found = mono_copy(c, h)
        cert = {"verdict": found is None, "mode": mode}
        red_hit = found is not None and found[0] == RED
        cert["red_reason"] = "red copy found by search" if red_hit else "no red copy (exhaustive search)"
        if red_hit:
            cert["blue_reason"] = "not examined"
        elif found is not None:
            cert["blue_reason"] = "blue copy found by search"
        else:
            cert["blue_reason"] = "no blue copy (exhaustive search)"
        if found is not None:
            cert["copy"] = [found[0], list(found[1].mapping)]
        return cert
    if mode != "structural":
        raise InvalidInput(f"unknown mode {mode!r}")
    blocks = clique_blocks(c)
    if blocks is None:
        raise InvalidInput("structural mode needs a red graph that is a disjoint union of cliques")
    sizes = [len(b) for b in blocks]
    cert = {"verdict": True, "mode": mode}
    emb = _pack_components(h, blocks)
    if emb is not None:
        cert["verdict"] = False
        cert["red_reason"] = f"components of H fit into red cliques of sizes {sorted(sizes, reverse=True)}"
        cert["blue_reason"] = "not examined"
        cert["copy"] = [RED, list(emb.mapping)]
        return cert
    if h.is_connected():
        cert["red_reason"] = f"largest red clique has {max(sizes, default=0)} < {h.n} = |H| vertices"
    else:
        cert["red_reason"] = f"components of H cannot be packed into red cliques of sizes {sorted(sizes, reverse=True)}"
    col = bounded_colouring(h, sizes)
    caps = ",".join(map(str, sorted(sizes, reverse=True)))
    if col is None:
        cert["blue_reason"] = f"H has no proper colouring with class sizes bounded by ({caps})"
        return cert
    cert["verdict"] = False
    used = [0] * len(blocks)
    mapping = []
    for v in range(h.n):
        mapping.append(blocks[col[v]][used[col[v]]])
        used[col[v]] += 1
    cert["blue_reason"] = f"H has a proper colouring with class sizes bounded by ({caps})"
    cert["copy"] = [BLUE, mapping]
    return cert


def lower_bound(c: ColoredCompleteGraph, h: SimpleGraph, mode: str = "structural") -> int | None:
    """N + 1 when ``c`` certifies r(h) > N, else None."""
    return c.N + 1 if certify_lower_bound(c, h, mode)["verdict"] else None
