"""Exact arrowing decisions K_N -> (H, H) and small Ramsey numbers.

Two complete search methods are provided.

``levels`` (default) grows the set of H-good colourings one vertex at a
time: every good colouring of K_{m+1} restricts to a good colouring of K_m,
so extending each isomorphism class of good colourings on m vertices by all
colour vectors of a new vertex, and keeping one canonical representative per
class (up to relabelling and swapping the colours), yields all classes on
m+1 vertices.  K_N arrows H iff level N is empty.

``edges`` colours the pairs of K_N one at a time in lexicographic order.
The pair {0,1} is red and vertex 0 has red neighbourhood {1..r}; every
colouring is equivalent to one of this shape.

Both prune a branch as soon as the pair just coloured completes a
monochromatic copy of H, found by a search anchored on that pair.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .canon import canonical_colouring_code, masks_of
from .coloring import ColoredCompleteGraph, mono_copy
from .errors import BudgetExceeded, CapExceeded, InvalidInput
from .formats import bits_to_hex, from_graph6, hex_to_bits, to_graph6
from .graph import SimpleGraph, automorphisms

CHECKPOINT_FORMAT = "chordram-levels-1"
_TIME_CHECK = 2048


class EdgeMatcher:
    """Finds copies of H through a prescribed host pair.

    One plan per orbit of ordered edges (a, b) of H under Aut(H); a plan maps
    a and b onto the given host pair and places the other vertices greedily.
    """

    def __init__(self, h: SimpleGraph):
        self.h = h
        autos = automorphisms(h)
        seen = set()
        self.plans = []
        for a, b in sorted(list(h.edges) + [(v, u) for u, v in h.edges]):
            if (a, b) in seen:
                continue
            for g in autos:
                seen.add((g[a], g[b]))
            self.plans.append(self._plan(a, b))

    def _plan(self, a, b):
        h = self.h
        order = [a, b]
        placed = (1 << a) | (1 << b)
        rest = set(range(h.n)) - {a, b}
        while rest:
            v = min(rest, key=lambda x: (-(h.masks[x] & placed).bit_count(), -h.degrees[x], x))
            order.append(v)
            placed |= 1 << v
            rest.discard(v)
        pos = {v: i for i, v in enumerate(order)}
        return tuple(tuple(pos[w] for w in h.adj[v] if pos[w] < i) for i, v in enumerate(order))[2:]

    def through(self, adj, x: int, y: int, universe: int) -> bool:
        """True if ``adj`` (bitmask rows) has a copy of H using pair {x, y}."""
        if not adj[x] >> y & 1:
            return False
        image = [x, y] + [0] * (self.h.n - 2)
        for plan in self.plans:
            if _match(adj, plan, image, 0, (1 << x) | (1 << y), universe):
                return True
        return False


def _match(adj, plan, image, i, used, universe):
    if i == len(plan):
        return True
    back = plan[i]
    if back:
        cand = adj[image[back[0]]] & ~used
        for j in back[1:]:
            cand &= adj[image[j]]
    else:
        cand = universe & ~used
    k = i + 2
    while cand:
        low = cand & -cand
        cand ^= low
        image[k] = low.bit_length() - 1
        if _match(adj, plan, image, i + 1, used | low, universe):
            return True
    return False


_MATCHERS: dict[str, EdgeMatcher] = {}


def _matcher(h: SimpleGraph) -> EdgeMatcher:
    key = to_graph6(h)
    if key not in _MATCHERS:
        _MATCHERS[key] = EdgeMatcher(h)
    return _MATCHERS[key]


@dataclass
class ArrowingVerdict:
    N: int
    target: SimpleGraph
    arrows: bool
    witness: ColoredCompleteGraph | None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "target_graph6": to_graph6(self.target),
            "arrows": self.arrows,
            "witness": None if self.witness is None else self.witness.to_json(),
            "witness_hex": None if self.witness is None else self.witness.to_hex(),
            "stats": self.stats,
        }


class _Budget:
    def __init__(self, nodes=None, seconds=None, deadline=None):
        self.max_nodes = nodes
        self.deadline = deadline if deadline is not None else (None if seconds is None else time.monotonic() + seconds)
        self.nodes = 0
        self.prunes = 0

    def tick(self):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded("node budget exceeded")
        if self.deadline is not None and self.nodes % _TIME_CHECK == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget exceeded")


# ------------------------------------------------------------ level search


def _extensions(code: int, m: int, matcher: EdgeMatcher, budget: _Budget) -> set[int]:
    """Canonical codes of all good one-vertex extensions of a good colouring."""
    red = masks_of(code, m) + [0]
    full = (1 << m) - 1
    blue = [full & ~red[v] & ~(1 << v) for v in range(m)] + [0]
    universe = (1 << (m + 1)) - 1
    check = m + 1 >= matcher.h.n
    out: set[int] = set()
    bit_m = 1 << m

    def rec(i):
        budget.tick()
        if i == m:
            out.add(canonical_colouring_code(red))
            return
        bit_i = 1 << i
        for rows in (red, blue):
            rows[i] |= bit_m
            rows[m] |= bit_i
            if check and matcher.through(rows, m, i, universe):
                budget.prunes += 1
            else:
                rec(i + 1)
            rows[i] ^= bit_m
            rows[m] ^= bit_i

    rec(0)
    return out


def _code_to_hex(code: int, m: int) -> str:
    e = m * (m - 1) // 2
    return bits_to_hex([(code >> (e - 1 - k)) & 1 for k in range(e)])


def _hex_to_code(h: str, m: int) -> int:
    code = 0
    for b in hex_to_bits(h, m * (m - 1) // 2):
        code = (code << 1) | b
    return code


def _chunk_worker(args):
    g6, m, codes, max_nodes, deadline = args
    h = from_graph6(g6)
    budget = _Budget(nodes=max_nodes, deadline=deadline)
    out: set[int] = set()
    try:
        for c in codes:
            out |= _extensions(c, m, _matcher(h), budget)
    except BudgetExceeded as exc:
        return ("budget", str(exc), budget.nodes, budget.prunes)
    return ("ok", sorted(out), budget.nodes, budget.prunes)


class LevelSearch:
    """Resumable level-by-level enumeration of H-good colourings."""

    def __init__(self, h: SimpleGraph, state: dict | None = None):
        if h.num_edges() == 0:
            raise InvalidInput("target graph needs at least one edge")
        self.h = h
        self.matcher = _matcher(h)
        self.level = 1
        self.current: list[int] = [0]
        self.position = 0
        self.next: set[int] = set()
        self.sizes = {1: 1}
        self.nodes = 0
        self.prunes = 0
        if state is not None:
            self._load(state)

    def _load(self, state):
        if state.get("format") != CHECKPOINT_FORMAT:
            raise InvalidInput("unknown checkpoint format")
        if state["target_graph6"] != to_graph6(self.h):
            raise InvalidInput("checkpoint belongs to a different target graph")
        m = state["level"]
        self.level = m
        self.current = [_hex_to_code(x, m) for x in state["current"]]
        self.position = state["position"]
        self.next = {_hex_to_code(x, m + 1) for x in state["next"]}
        self.sizes = {int(k): v for k, v in state["sizes"].items()}
        self.nodes = state.get("nodes", 0)
        self.prunes = state.get("prunes", 0)

    def checkpoint(self) -> dict:
        m = self.level
        return {
            "format": CHECKPOINT_FORMAT,
            "target_graph6": to_graph6(self.h),
            "level": m,
            "current": [_code_to_hex(c, m) for c in self.current],
            "position": self.position,
            "next": [_code_to_hex(c, m + 1) for c in sorted(self.next)],
            "sizes": {str(k): v for k, v in self.sizes.items()},
            "nodes": self.nodes,
            "prunes": self.prunes,
        }

    def stats(self) -> dict:
        return {"nodes": self.nodes, "prunes": self.prunes, "level_sizes": dict(sorted(self.sizes.items()))}

    def advance(self, budget: _Budget, workers: int = 1):
        """Complete the current level; raises BudgetExceeded with the state saved."""
        m = self.level
        if workers <= 1:
            try:
                while self.position < len(self.current):
                    before_n, before_p = budget.nodes, budget.prunes
                    try:
                        ext = _extensions(self.current[self.position], m, self.matcher, budget)
                    finally:
                        self.nodes += budget.nodes - before_n
                        self.prunes += budget.prunes - before_p
                    self.next |= ext
                    self.position += 1
            except BudgetExceeded as exc:
                raise BudgetExceeded(str(exc), self.stats(), self.checkpoint()) from None
        else:
            self._advance_parallel(budget, workers)
        self.level = m + 1
        self.current = sorted(self.next)
        self.sizes[m + 1] = len(self.current)
        self.position = 0
        self.next = set()

    def _advance_parallel(self, budget, workers):
        m = self.level
        todo = self.current[self.position:]
        size = max(1, len(todo) // (workers * 8))
        chunks = [todo[k:k + size] for k in range(0, len(todo), size)]
        g6 = to_graph6(self.h)
        remaining = None if budget.max_nodes is None else budget.max_nodes - budget.nodes
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_chunk_worker, [(g6, m, c, remaining, budget.deadline) for c in chunks]))
        for chunk, (status, payload, nodes, prunes) in zip(chunks, results):
            self.nodes += nodes
            self.prunes += prunes
            budget.nodes += nodes
            if status != "ok":
                raise BudgetExceeded(payload, self.stats(), self.checkpoint())
            self.next.update(payload)
            self.position += len(chunk)

    def good_colouring(self) -> ColoredCompleteGraph | None:
        """A representative of the current level, or None if it is empty.

        The most lopsided colouring is chosen (ties: lowest code), with red
        as the smaller colour class; for cycles this picks out the classical
        block constructions.
        """
        if not self.current:
            return None
        m = self.level
        total = m * (m - 1) // 2

        def key(code):
            red = sum(x.bit_count() for x in masks_of(code, m)) // 2
            return (-abs(total - 2 * red), code)

        c = ColoredCompleteGraph.from_masks(masks_of(min(self.current, key=key), m))
        return c.swapped() if 2 * c.red.num_edges() > total else c


# ------------------------------------------------------------- edge search


def _edge_branch(N: int, h: SimpleGraph, r: int, budget: _Budget):
    """Search colourings with red N(0) = {1..r}; returns red masks or None."""
    matcher = _matcher(h)
    universe = (1 << N) - 1
    red = [0] * N
    blue = [0] * N
    pairs = [(u, v) for u in range(N) for v in range(u + 1, N)]

    def colour(rows, u, v):
        rows[u] |= 1 << v
        rows[v] |= 1 << u

    for v in range(1, N):
        rows = red if v <= r else blue
        colour(rows, 0, v)
        if N >= h.n and matcher.through(rows, 0, v, universe):
            return None
    rest = pairs[N - 1:]

    def rec(k):
        budget.tick()
        if k == len(rest):
            return True
        u, v = rest[k]
        bu, bv = 1 << u, 1 << v
        for rows in (red, blue):
            rows[u] |= bv
            rows[v] |= bu
            if N >= h.n and matcher.through(rows, u, v, universe):
                budget.prunes += 1
            elif rec(k + 1):
                return True
            rows[u] ^= bv
            rows[v] ^= bu
        return False

    return list(red) if rec(0) else None


def _edge_worker(args):
    N, g6, r, max_nodes, deadline = args
    budget = _Budget(nodes=max_nodes, deadline=deadline)
    try:
        res = _edge_branch(N, from_graph6(g6), r, budget)
    except BudgetExceeded as exc:
        return ("budget", str(exc), budget.nodes, budget.prunes)
    return ("ok", res, budget.nodes, budget.prunes)


# ---------------------------------------------------------------- public API


def arrows(
    N: int,
    h: SimpleGraph,
    *,
    method: str = "levels",
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
    workers: int = 1,
    resume: dict | None = None,
) -> ArrowingVerdict:
    """Decide whether every 2-colouring of K_N contains a monochromatic ``h``.

    Raises BudgetExceeded when a budget runs out; for the ``levels`` method
    the exception carries a checkpoint that ``resume`` accepts.
    """
    if N < 1:
        raise InvalidInput("N must be at least 1")
    if h.num_edges() == 0:
        raise InvalidInput("target graph needs at least one edge")
    t0 = time.monotonic()
    if N < h.n:
        w = ColoredCompleteGraph(SimpleGraph(N))
        return ArrowingVerdict(N, h, False, w, {"nodes": 0, "prunes": 0, "seconds": 0.0, "reason": "N < |H|"})
    budget = _Budget(budget_nodes, budget_seconds)
    if method == "levels":
        search = LevelSearch(h, resume)
        if search.level > N:
            raise InvalidInput("checkpoint is past the requested N")
        while search.level < N and search.current:
            search.advance(budget, workers)
        stats = search.stats()
        stats["seconds"] = round(time.monotonic() - t0, 3)
        w = search.good_colouring() if search.level == N else None
        if w is None:
            return ArrowingVerdict(N, h, True, None, stats)
        return ArrowingVerdict(N, h, False, w, stats)
    if method == "edges":
        g6 = to_graph6(h)
        tasks = [(N, g6, r, budget_nodes, budget.deadline) for r in range(1, N)]
        if workers <= 1:
            results = []
            for t in tasks:
                res = _edge_worker(t)
                results.append(res)
                if res[0] == "ok" and res[1] is not None:
                    break
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_edge_worker, tasks))
        nodes = sum(r[2] for r in results)
        prunes = sum(r[3] for r in results)
        stats = {"nodes": nodes, "prunes": prunes, "seconds": round(time.monotonic() - t0, 3)}
        # the lowest branch decides, whatever the schedule
        for status, payload, _, _ in results:
            if status == "budget":
                raise BudgetExceeded(payload, stats)
            if payload is not None:
                return ArrowingVerdict(N, h, False, ColoredCompleteGraph.from_masks(payload), stats)
        return ArrowingVerdict(N, h, True, None, stats)
    raise InvalidInput(f"unknown method {method!r}")


@dataclass
class RamseyResult:
    target: SimpleGraph
    value: int
    lower_witness: ColoredCompleteGraph | None
    stats: dict

    def to_json(self) -> dict:
        return {
            "target_graph6": to_graph6(self.target),
            "r": self.value,
            "lower_witness": None if self.lower_witness is None else self.lower_witness.to_json(),
            "lower_witness_hex": None if self.lower_witness is None else self.lower_witness.to_hex(),
            "stats": self.stats,
        }


def ramsey_search(
    h: SimpleGraph,
    N_max: int,
    *,
    method: str = "levels",
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
    workers: int = 1,
    resume: dict | None = None,
) -> RamseyResult:
    """Least N <= N_max with K_N -> (h, h), plus a good colouring of K_{N-1}."""
    if N_max < h.n:
        raise InvalidInput("N_max must be at least |H|")
    t0 = time.monotonic()
    if method == "levels":
        budget = _Budget(budget_nodes, budget_seconds)
        search = LevelSearch(h, resume)
        prev = None
        while search.current:
            if search.level >= N_max:
                raise CapExceeded(f"K_{N_max} does not arrow the target")
            prev = search.good_colouring()
            search.advance(budget, workers)
        stats = search.stats()
        stats["seconds"] = round(time.monotonic() - t0, 3)
        return RamseyResult(h, search.level, prev, stats)
    total = {"nodes": 0, "prunes": 0}
    prev = None
    for N in range(h.n, N_max + 1):
        v = arrows(N, h, method=method, budget_nodes=budget_nodes, budget_seconds=budget_seconds, workers=workers)
        total["nodes"] += v.stats["nodes"]
        total["prunes"] += v.stats["prunes"]
        if v.arrows:
            total["seconds"] = round(time.monotonic() - t0, 3)
            return RamseyResult(h, N, prev, total)
        prev = v.witness
    raise CapExceeded(f"K_{N_max} does not arrow the target")


def ramsey_number(h: SimpleGraph, N_max: int, **kwargs) -> int:
    return ramsey_search(h, N_max, **kwargs).value


def verify_witness(verdict: ArrowingVerdict) -> bool:
    """Re-check a negative verdict's witness with the general subgraph search."""
    if verdict.arrows:
        return verdict.witness is None
    return verdict.witness is not None and mono_copy(verdict.witness, verdict.target) is None
