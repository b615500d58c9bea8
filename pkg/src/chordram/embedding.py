"""Greedy embeddings of bounded-degree graphs into dense hosts, and the
degree cleanup that turns a near-extremal 2-multicolouring into sets with
minimum-degree guarantees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import BudgetExceeded, CapacityError, InvalidInput
from .graph import Embedding, SimpleGraph, iter_bits


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _match_low(j: SimpleGraph, f: SimpleGraph, low: list[int], image: dict) -> int | None:
    """Pin each low host vertex to a low-degree pattern vertex, the pattern
    vertices pairwise at distance >= 3.  Returns the used host mask."""
    blocked = used = 0
    for h in sorted(low, key=lambda v: (f.degrees[v], v)):
        cands = [p for p in range(j.n) if p not in image and not blocked >> p & 1]
        if not cands:
            return None
        p = min(cands, key=lambda x: (j.degrees[x], x))
        image[p] = h
        used |= 1 << h
        ball = 1 << p
        for w in iter_bits(j.masks[p]):
            ball |= 1 << w | j.masks[w]
        blocked |= ball
    return used


def greedy_dense_embed(j: SimpleGraph, f: SimpleGraph, eps: float, *, budget: int | None = None) -> Embedding | None:
    """Embed ``j`` into ``f`` greedily; None means the heuristic gave up.

    Host vertices of degree below (1 - 2 eps)|F| are "low".  When the
    embedding is spanning they must all be used, so each is first matched to
    a distinct low-degree pattern vertex, the chosen pattern vertices being
    pairwise at distance >= 3 so those choices do not constrain each other
    (skipped when there are too many low vertices for that).
    The rest is placed most-constrained-first, preferring host candidates
    with the most unused high-degree neighbours, with backtracking capped by
    ``budget`` nodes (default 50 |J|).
    """
    if j.n > f.n:
        return None
    if j.n == 0:
        return Embedding(())
    if budget is None:
        budget = 50 * j.n + 1000
    thresh = (1 - 2 * eps) * f.n
    high = _mask(v for v in range(f.n) if f.degrees[v] >= thresh)
    low = [v for v in range(f.n) if not high >> v & 1]
    image: dict[int, int] = {}
    used = 0
    if j.n == f.n and low:
        used = _match_low(j, f, low, image)
        if used is None:
            # more low vertices than spread-out pattern vertices: plain search
            image.clear()
            used = 0
    full = (1 << f.n) - 1
    nodes = 0

    def candidates(p, used_mask):
        c = full & ~used_mask
        for w in j.adj[p]:
            if w in image:
                c &= f.masks[image[w]]
        return c

    def score(h, used_mask):
        return (-(f.masks[h] & high & ~used_mask).bit_count(), not high >> h & 1, h)

    def rec(used_mask):
        nonlocal nodes
        if len(image) == j.n:
            return True
        best, best_c = None, None
        for p in range(j.n):
            if p in image:
                continue
            c = candidates(p, used_mask)
            key = (c.bit_count(), -sum(1 for w in j.adj[p] if w in image), -j.degrees[p])
            if best is None or key < best[0]:
                best, best_c = (key, p), c
                if c == 0:
                    return False
        p = best[1]
        for h in sorted(iter_bits(best_c), key=lambda x: score(x, used_mask)):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("greedy embedding budget")
            image[p] = h
            if rec(used_mask | 1 << h):
                return True
            del image[p]
        return False

    def attempt(start):
        nonlocal nodes
        nodes = 0
        try:
            return rec(start)
        except BudgetExceeded:
            return False

    ok = attempt(used)
    if not ok and image:
        image.clear()
        ok = attempt(0)
    if not ok:
        return None
    emb = Embedding(tuple(image[p] for p in range(j.n)))
    assert emb.is_valid(j, f)
    return emb


@dataclass(frozen=True)
class TwoSidedResult:
    embedding: Embedding | None
    defect: int
    guaranteed: bool


def two_sided_greedy_embed(
    j: SimpleGraph,
    x_part: Iterable[int],
    y_part: Iterable[int],
    host: SimpleGraph,
    a_side: Iterable[int],
    b_side: Iterable[int],
    *,
    delta: int | None = None,
    deg_defect: int | None = None,
    z_part: Iterable[int] = (),
    s_side: Iterable[int] = (),
) -> TwoSidedResult:
    """Embed X into B' (and an independent Z into S) in label order, then each
    y in Y into the lowest unused common host neighbour in A' of its placed
    neighbours.

    ``host`` is the graph of the colour in use.  The defect is the largest
    number of vertices of A' missed by the host neighbourhood of an X- or
    Z-image; ``deg_defect`` may give an upper bound for it instead.  Success
    is guaranteed when |A'| - delta * defect > |Y| - 1.
    """
    xs, ys, zs = sorted(x_part), sorted(y_part), sorted(z_part)
    a_list, b_list, s_list = sorted(a_side), sorted(b_side), sorted(s_side)
    if set(xs) & set(ys) or set(zs) & (set(xs) | set(ys)) or len(xs) + len(ys) + len(zs) != j.n:
        raise InvalidInput("X, Y (and Z) must partition the pattern")
    if set(a_list) & set(b_list) or set(s_list) & (set(a_list) | set(b_list)):
        raise InvalidInput("host sides must be disjoint")
    xm, ym, zm = _mask(xs), _mask(ys), _mask(zs)
    for u, v in j.edges:
        mu, mv = 1 << u, 1 << v
        if (xm & mu and xm & mv) or (ym & mu and ym & mv) or (zm & mu and zm & mv):
            raise InvalidInput(f"pattern edge {u}-{v} inside one part")
        if (xm & mu and zm & mv) or (zm & mu and xm & mv):
            raise InvalidInput(f"pattern edge {u}-{v} joins X and Z")
    if len(xs) > len(b_list) or len(ys) > len(a_list) or len(zs) > len(s_list):
        raise CapacityError("a pattern part is larger than its host side")
    if delta is None:
        delta = j.max_degree
    am = _mask(a_list)
    mapping = [None] * j.n
    for x, b in zip(xs, b_list):
        mapping[x] = b
    for zv, s in zip(zs, s_list):
        mapping[zv] = s
    placed = [mapping[v] for v in xs + zs]
    defect = max(((am & ~host.masks[h]).bit_count() for h in placed), default=0)
    if deg_defect is not None:
        if deg_defect < defect:
            raise InvalidInput(f"declared defect {deg_defect} is below the actual defect {defect}")
        defect = deg_defect
    guaranteed = len(a_list) - delta * defect > len(ys) - 1
    used = 0
    for y in ys:
        cand = am & ~used
        for w in j.adj[y]:
            cand &= host.masks[mapping[w]]
        if not cand:
            return TwoSidedResult(None, defect, guaranteed)
        h = (cand & -cand).bit_length() - 1
        mapping[y] = h
        used |= 1 << h
    emb = Embedding(tuple(mapping))
    assert emb.is_valid(j, host)
    return TwoSidedResult(emb, defect, guaranteed)


@dataclass(frozen=True)
class CleanupResult:
    A: frozenset
    B: frozenset
    removed_wrong_inside: frozenset
    removed_heavy_to_v2: frozenset
    removed_from_v2: frozenset
    hypotheses_hold: bool
    size_guarantee: bool | None


def stability_cleanup(
    colours: tuple[SimpleGraph, SimpleGraph],
    v1: Iterable[int],
    v2: Iterable[int],
    beta: float,
    i: int,
) -> CleanupResult:
    """Discard the vertices with many wrongly coloured edges.

    ``colours`` holds the graphs of colour 1 and colour 2 (an edge may lie in
    both).  With t = beta^(1/10): a vertex of V1 goes if it has at least
    t|V1| edges of colour 3-i inside V1 or at least t|V2| edges of colour i
    to V2; a vertex of V2 goes if it has at least t|V1| edges of colour i to
    V1.  The size bounds |A| >= (1 - 3t)|V1|, |B| >= (1 - t)|V2| are checked
    only when the input has at most beta^(1/5)|V1|^2 edges of colour 3-i in
    V1 and at most beta^(1/5)|V1||V2| edges of colour i between V1 and V2.
    """
    if i not in (1, 2):
        raise InvalidInput("colour index must be 1 or 2")
    if not 0 < beta < 1:
        raise InvalidInput("beta must lie in (0, 1)")
    s1, s2 = frozenset(v1), frozenset(v2)
    if s1 & s2:
        raise InvalidInput("V1 and V2 must be disjoint")
    same, other = colours[i - 1], colours[2 - i]
    m1, m2 = _mask(s1), _mask(s2)
    t = beta ** 0.1
    wrong_inside = frozenset(v for v in s1 if (other.masks[v] & m1).bit_count() >= t * len(s1))
    heavy = frozenset(v for v in s1 if (same.masks[v] & m2).bit_count() >= t * len(s2))
    from_v2 = frozenset(v for v in s2 if (same.masks[v] & m1).bit_count() >= t * len(s1))
    a = s1 - wrong_inside - heavy
    b = s2 - from_v2
    bad_inside = sum((other.masks[v] & m1).bit_count() for v in s1) // 2
    bad_across = sum((same.masks[v] & m2).bit_count() for v in s1)
    hyp = bad_inside <= beta ** 0.2 * len(s1) ** 2 and bad_across <= beta ** 0.2 * len(s1) * len(s2)
    size_ok = None
    if hyp:
        size_ok = len(a) >= (1 - 3 * t) * len(s1) - 1e-9 and len(b) >= (1 - t) * len(s2) - 1e-9
    return CleanupResult(a, b, wrong_inside, heavy, from_v2, hyp, size_ok)


def guaranteed_capacity(a_size: int, delta: int, defect: int) -> int:
    """Largest |Y| the counting argument covers: |A'| - delta*defect > |Y| - 1."""
    return max(0, a_size - delta * defect)


def dense_regime(f: SimpleGraph, delta: int, eps: float) -> bool:
    """Whether ``f`` meets the degree hypotheses of the dense embedding regime."""
    n = f.n
    if not 0 < eps < 1 / (delta * delta + 4):
        return False
    degs = f.degrees
    return min(degs, default=0) >= 3 * delta * eps * n and sum(1 for d in degs if d < (1 - 2 * eps) * n) <= eps * n + 1e-9

