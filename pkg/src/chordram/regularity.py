"""Regular-pair diagnostics and path embedding through a chain of clusters.

The hosts here are ordinary graphs (typically dense random bipartite
layers), not regularity partitions; regularity is measured, never assumed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import BudgetExceeded, CapacityError, EmbeddingFailure, FloorError, InvalidInput, ParityError
from .formats import graph_to_json
from .graph import SimpleGraph, iter_bits

EXACT_LIMIT = 16


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _check_pair(a: Sequence[int], b: Sequence[int]):
    if not a or not b:
        raise InvalidInput("both sets must be nonempty")
    if set(a) & set(b):
        raise InvalidInput("the sets must be disjoint")


def _edges_between(host: SimpleGraph, a: Iterable[int], bmask: int) -> int:
    return sum((host.masks[v] & bmask).bit_count() for v in a)


def density(host: SimpleGraph, a: Iterable[int], b: Iterable[int]) -> Fraction:
    """e(A, B) / (|A| |B|) as an exact fraction."""
    a, b = sorted(set(a)), sorted(set(b))
    _check_pair(a, b)
    return Fraction(_edges_between(host, a, _mask(b)), len(a) * len(b))


@dataclass
class RegularityVerdict:
    density: Fraction
    mode: str
    eps: float
    max_deviation: float
    regular: bool | None
    witness: tuple | None = None
    samples: int = 0
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "density": str(self.density),
            "mode": self.mode,
            "eps": self.eps,
            "max_deviation": self.max_deviation,
            "regular": self.regular,
            "witness": None if self.witness is None else [sorted(self.witness[0]), sorted(self.witness[1])],
            "samples": self.samples,
            "seed": self.seed,
        }


def regularity_check(
    host: SimpleGraph,
    a: Iterable[int],
    b: Iterable[int],
    eps: float,
    mode: str = "exact",
    *,
    samples: int = 1000,
    seed: int | None = None,
) -> RegularityVerdict:
    """Test |d(A', B') - d(A, B)| < eps over subpairs with |A'| >= eps|A|, |B'| >= eps|B|.

    ``exact`` (|A|, |B| <= 16) decides the question: for a fixed A' and
    size s the extreme densities come from the s vertices of B with the
    most, or fewest, neighbours in A'.  ``sampled`` draws ``samples``
    uniform pairs at the threshold sizes; it can refute regularity but
    never certify it, so ``regular`` is False or None.
    """
    a, b = sorted(set(a)), sorted(set(b))
    _check_pair(a, b)
    if not 0 < eps <= 1:
        raise InvalidInput("eps must lie in (0, 1]")
    d = density(host, a, b)
    sa = max(1, math.ceil(eps * len(a) - 1e-12))
    sb = max(1, math.ceil(eps * len(b) - 1e-12))
    if mode == "exact":
        if len(a) > EXACT_LIMIT or len(b) > EXACT_LIMIT:
            raise InvalidInput(f"exact mode needs |A|, |B| <= {EXACT_LIMIT}")
        best = Fraction(-1)
        witness = None
        for r in range(sa, len(a) + 1):
            for sub in combinations(a, r):
                am = _mask(sub)
                ranked = sorted(b, key=lambda v: ((host.masks[v] & am).bit_count(), v))
                degs = [(host.masks[v] & am).bit_count() for v in ranked]
                prefix = [0]
                for x in degs:
                    prefix.append(prefix[-1] + x)
                total = prefix[-1]
                for s in range(sb, len(b) + 1):
                    lo = Fraction(prefix[s], r * s)
                    hi = Fraction(total - prefix[len(b) - s], r * s)
                    for val, bs in ((lo, ranked[:s]), (hi, ranked[len(b) - s:])):
                        dev = abs(val - d)
                        if dev > best:
                            best, witness = dev, (frozenset(sub), frozenset(bs))
        regular = best < eps
        return RegularityVerdict(d, mode, eps, float(best), regular, None if regular else witness)
    if mode == "sampled":
        if samples < 1:
            raise InvalidInput("sampled mode needs a positive sample budget")
        rng = random.Random(seed)
        best = -1.0
        witness = None
        df = float(d)
        for _ in range(samples):
            sub_a = rng.sample(a, sa)
            sub_b = rng.sample(b, sb)
            val = _edges_between(host, sub_a, _mask(sub_b)) / (sa * sb)
            dev = abs(val - df)
            if dev > best:
                best, witness = dev, (frozenset(sub_a), frozenset(sub_b))
        refuted = best >= eps
        return RegularityVerdict(d, mode, eps, best, False if refuted else None, witness if refuted else None, samples, seed)
    raise InvalidInput(f"unknown mode {mode!r}")


def typical_vertices(host: SimpleGraph, a: Iterable[int], b: Iterable[int], eps: float, d: float) -> frozenset:
    """Vertices of A with at least (d - eps)|B| neighbours in B."""
    b = list(b)
    bm = _mask(b)
    need = (d - eps) * len(b)
    return frozenset(v for v in a if (host.masks[v] & bm).bit_count() >= need - 1e-12)


def pair_path_embed(
    host: SimpleGraph,
    x1: Iterable[int],
    x2: Iterable[int],
    v1: int,
    v2: int,
    length: int,
    *,
    min_deg_fraction: float = 0.0,
    forbidden: Iterable[int] = (),
    budget: int | None = None,
) -> list[int] | None:
    """A v1-v2 path with exactly ``length`` edges alternating between X1 and X2.

    Depth-first; at each step the candidates are tried fewest-free-
    neighbours first, keeping the neighbours of v2 for last.  None means the
    backtracking budget (default 20 * length + 1000 nodes) ran out or no
    path exists.
    """
    if length < 1 or length % 2 == 0:
        raise InvalidInput("a path between the two sides has odd length")
    x1, x2 = set(x1), set(x2)
    if x1 & x2:
        raise InvalidInput("X1 and X2 must be disjoint")
    if v1 not in x1 or v2 not in x2:
        raise InvalidInput("v1 must lie in X1 and v2 in X2")
    if (host.masks[v1] & _mask(x2)).bit_count() < min_deg_fraction * len(x2):
        raise InvalidInput("v1 has too few neighbours in X2")
    if (host.masks[v2] & _mask(x1)).bit_count() < min_deg_fraction * len(x1):
        raise InvalidInput("v2 has too few neighbours in X1")
    if length == 1:
        return [v1, v2] if host.has_edge(v1, v2) else None
    if budget is None:
        budget = 20 * length + 1000
    ban = _mask(forbidden)
    sides = (_mask(x1) & ~ban, _mask(x2) & ~ban)
    masks = host.masks
    end_nb = masks[v2] & sides[0]
    path = [v1]
    used = (1 << v1) | (1 << v2)
    nodes = 0

    def options(t: int) -> list[int]:
        """Candidates for path[t] (t = 1 .. length-1), best first."""
        side = sides[t % 2]
        c = masks[path[-1]] & side & ~used
        if t == length - 1:
            c &= end_nb
        elif t == length - 2:
            c = sum(1 << v for v in iter_bits(c) if masks[v] & end_nb & ~used)
        nxt = sides[(t + 1) % 2]
        return sorted(iter_bits(c), key=lambda v: ((end_nb >> v) & 1, (masks[v] & nxt & ~used).bit_count(), v))

    stack = [options(1)]
    try:
        while stack:
            if len(path) == length:
                return path + [v2]
            opts = stack[-1]
            if not opts:
                stack.pop()
                if len(path) > 1:
                    used &= ~(1 << path.pop())
                continue
            v = opts.pop(0)
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("path budget")
            path.append(v)
            used |= 1 << v
            if len(path) == length:
                return path + [v2]
            stack.append(options(len(path)))
    except BudgetExceeded:
        return None
    return None


# ---------------------------------------------------------- chunk allocation


@dataclass(frozen=True)
class ChunkAllocation:
    """q[i][j-1] edges of path i go into the cluster pair (V_j, V_{j+1})."""

    q: tuple
    ell: int
    cluster_size: int
    eps: float
    hypotheses: dict = field(default_factory=dict, compare=False)
    moves: int = 0

    def capacity(self) -> float:
        return 2 * (1 - 2 * self.eps ** 0.25) * self.cluster_size

    def column_loads(self) -> dict[int, int]:
        return {j: sum(row[j - 1] + 1 for row in self.q) for j in range(2, self.ell, 2)}

    def violations(self, lengths: Sequence[int]) -> list[str]:
        out = []
        if len(self.q) != len(lengths):
            out.append("row count differs from the number of paths")
        for i, row in enumerate(self.q):
            if len(row) != self.ell - 1:
                out.append(f"row {i} has {len(row)} entries")
                continue
            for j, x in enumerate(row, start=1):
                if j % 2 and x != 1:
                    out.append(f"q[{i}][{j}] = {x} but odd slots carry 1")
                if j % 2 == 0 and (x < 3 or x % 2 == 0):
                    out.append(f"q[{i}][{j}] = {x} must be odd and >= 3")
            if i < len(lengths) and sum(row) != lengths[i]:
                out.append(f"row {i} sums to {sum(row)}, not {lengths[i]}")
        cap = self.capacity()
        for j, load in self.column_loads().items():
            if load > cap + 1e-9:
                out.append(f"column {j} load {load} exceeds {cap:.3f}")
        return out

    def to_json(self) -> dict:
        return {
            "q": [list(r) for r in self.q],
            "ell": self.ell,
            "cluster_size": self.cluster_size,
            "eps": self.eps,
            "hypotheses": self.hypotheses,
            "moves": self.moves,
        }


def allocation_feasible(lengths: Sequence[int], ell: int, cluster_size: int, eps: float) -> bool:
    """Exact test for the existence of an allocation (for lengths at or above the floor)."""
    m = ell // 2 - 1
    cap = 2 * (1 - 2 * eps ** 0.25) * cluster_size
    e = int(math.floor(cap + 1e-9))
    e -= e % 2
    k = len(lengths)
    return 4 * k <= e and sum(p - 1 for p in lengths) <= m * e


def allocate_chunks(lengths: Sequence[int], ell: int, cluster_size: int, eps: float) -> ChunkAllocation:
    """Split each odd length p into ell-1 odd chunks: 1 on odd slots, >= 3 on even ones.

    Each row spreads its residue evenly over the even slots, leftmost
    slots taking the remainder.  If a column then exceeds its capacity,
    chunks of 2 edges are moved (lowest row first) from the leftmost
    overfull column to the leftmost column with room.
    """
    if ell < 4 or ell % 2:
        raise ParityError(f"ell = {ell}: need an even ell >= 4 (ell - 1 odd chunks must sum to an odd length)")
    if not lengths:
        raise InvalidInput("no paths given")
    for p in lengths:
        if p % 2 == 0:
            raise ParityError(f"path length {p} is even")
        if p < 2 * ell - 3:
            raise FloorError(f"path length {p} is below the floor {2 * ell - 3}")
    if not 0 < eps < 1:
        raise InvalidInput("eps must lie in (0, 1)")
    if not allocation_feasible(lengths, ell, cluster_size, eps):
        raise CapacityError("the paths do not fit into the even cluster pairs")
    m = ell // 2 - 1
    rows = []
    for p in lengths:
        t_total = (p - ell // 2 - m) // 2
        base, extra = divmod(t_total, m)
        ts = [base + (1 if s < extra else 0) for s in range(m)]
        row = []
        for s in range(m):
            row += [1, 2 * ts[s] + 1]
        rows.append(row + [1])
    cap = 2 * (1 - 2 * eps ** 0.25) * cluster_size
    moves = 0

    def load(col):
        return sum(r[col] + 1 for r in rows)

    cols = list(range(1, ell - 1, 2))
    while True:
        over = [c for c in cols if load(c) > cap + 1e-9]
        if not over:
            break
        src = over[0]
        dst = next(c for c in cols if load(c) + 2 <= cap + 1e-9)
        row = next(r for r in rows if r[src] >= 5)
        row[src] -= 2
        row[dst] += 2
        moves += 1
    k = len(lengths)
    hyp = {
        "lengths_at_least_3ell": all(p >= 3 * ell for p in lengths),
        "total_within_(1-2eps^(1/4))(ell-2)|V|": sum(lengths) <= (1 - 2 * eps ** 0.25) * (ell - 2) * cluster_size + 1e-9,
        "k_at_most_eps^(1/2)|V|": k <= eps ** 0.5 * cluster_size + 1e-9,
    }
    return ChunkAllocation(tuple(tuple(r) for r in rows), ell, cluster_size, eps, hyp, moves)


# ------------------------------------------------------------- chain embed


@dataclass(frozen=True)
class ClusterChain:
    host: SimpleGraph
    clusters: tuple

    def __post_init__(self):
        cl = tuple(tuple(sorted(set(c))) for c in self.clusters)
        object.__setattr__(self, "clusters", cl)
        if len(cl) < 2:
            raise InvalidInput("a chain needs at least two clusters")
        sizes = {len(c) for c in cl}
        if len(sizes) != 1 or 0 in sizes:
            raise InvalidInput("clusters must be nonempty and of equal size")
        for x in range(len(cl)):
            for y in range(x + 1, len(cl)):
                if (x, y) != (0, len(cl) - 1) and set(cl[x]) & set(cl[y]):
                    raise InvalidInput(f"clusters {x + 1} and {y + 1} overlap")
        for c in cl:
            if any(not 0 <= v < self.host.n for v in c):
                raise InvalidInput("cluster vertex outside the host")

    @property
    def ell(self) -> int:
        return len(self.clusters)

    @property
    def size(self) -> int:
        return len(self.clusters[0])

    def cluster(self, j: int) -> tuple:
        """V_j, 1-based."""
        return self.clusters[j - 1]

    def to_json(self) -> dict:
        return {"host": graph_to_json(self.host), "clusters": [list(c) for c in self.clusters]}


@dataclass(frozen=True)
class AnchoredPathSpec:
    length: int
    start: int
    end: int

    def __post_init__(self):
        if self.length < 1 or self.length % 2 == 0:
            raise InvalidInput("path length must be odd")
        if self.start == self.end:
            raise InvalidInput("anchors must be distinct")


@dataclass
class ChainEmbedding:
    paths: list
    waypoints: list
    report: dict

    def to_json(self) -> dict:
        return {"paths": self.paths, "waypoints": self.waypoints, "report": self.report}


def _anchor_checks(chain: ClusterChain, specs, eps):
    host = chain.host
    v1, v2 = chain.cluster(1), chain.cluster(2)
    vl, vl1 = chain.cluster(chain.ell), chain.cluster(chain.ell - 1)
    d_first = float(density(host, v1, v2))
    d_last = float(density(host, vl, vl1))
    ok_a = typical_vertices(host, v1, v2, eps, d_first)
    ok_b = typical_vertices(host, vl, vl1, eps, d_last)
    seen = set()
    for i, s in enumerate(specs):
        if s.start not in v1 or s.end not in vl:
            raise InvalidInput(f"path {i}: anchors must lie in V_1 and V_ell")
        if s.start not in ok_a or s.end not in ok_b:
            raise InvalidInput(f"path {i}: anchors are not eps-typical towards V_2 / V_(ell-1)")
        if {s.start, s.end} & seen:
            raise InvalidInput(f"path {i}: anchor shared with another path")
        seen |= {s.start, s.end}


def chain_path_embed(
    chain: ClusterChain,
    specs: Sequence[AnchoredPathSpec],
    alloc: ChunkAllocation,
    eps: float,
    *,
    evidence_eps: float | None = None,
    evidence_samples: int = 200,
    seed: int | None = None,
) -> ChainEmbedding:
    """Embed the anchored paths one after another through V_1, ..., V_ell.

    Path i gets waypoints w_j in V_j (w_1, w_ell its anchors).  Working sets
    are W_2 = N(w_1) & V_2, W_(ell-1) = N(w_ell) & V_(ell-1) and W_j = V_j
    otherwise, minus every vertex used so far; for even j the sets W_j and
    W_(j+1) are cut to equal size by dropping their highest labels.  w_j is
    the lowest-labelled vertex of W_j with at least (d - eps^(1/2))|W|
    neighbours in each neighbouring working set (d that pair's density);
    for even j it must also be adjacent to w_(j-1), and an odd j >= 3
    must leave such a w_(j+1) among its neighbours.  The q_j edges of
    an even slot are routed inside (W_j, W_(j+1)) by pair_path_embed.
    """
    ell = chain.ell
    k = len(specs)
    if alloc.ell != ell:
        raise InvalidInput("allocation built for a different ell")
    lengths = [s.length for s in specs]
    bad = alloc.violations(lengths)
    cap = 2 * (1 - 2 * eps ** 0.25) * chain.size
    if any(load > cap + 1e-9 for load in alloc.column_loads().values()):
        raise CapacityError("allocation exceeds the capacity of an even cluster pair")
    if bad:
        raise InvalidInput("invalid allocation: " + "; ".join(bad))
    if k > eps ** 0.5 * chain.size + 1e-9:
        raise InvalidInput("too many paths for the cluster size")
    _anchor_checks(chain, specs, eps)
    host = chain.host
    masks = host.masks
    root = eps ** 0.5
    vm = [0] + [_mask(chain.cluster(j)) for j in range(1, ell + 1)]
    report = {"conditions_f": [], "conditions_g": [], "evidence": []}
    if evidence_eps is not None:
        for j in range(1, ell):
            v = regularity_check(host, chain.cluster(j), chain.cluster(j + 1), evidence_eps, "sampled",
                                 samples=evidence_samples, seed=None if seed is None else seed + j)
            report["evidence"].append({"pair": [j, j + 1], **v.to_json()})
    used = 0
    paths, waypoints = [], []
    for i, spec in enumerate(specs):
        q = alloc.q[i]
        a, b = spec.start, spec.end
        w_sets = [0] * (ell + 1)
        for j in range(2, ell):
            w = vm[j] & ~used
            if j == 2:
                w &= masks[a]
            if j == ell - 1:
                w &= masks[b]
            w_sets[j] = w
        for j in range(2, ell - 1, 2):
            x, y = w_sets[j], w_sets[j + 1]
            nx, ny = x.bit_count(), y.bit_count()
            if nx > ny:
                w_sets[j] = _truncate(x, ny)
            elif ny > nx:
                w_sets[j + 1] = _truncate(y, nx)
        for j in range(2, ell):
            size = w_sets[j].bit_count()
            qj = q[2 * (j // 2) - 1]
            if not (1 - 2 * eps ** 0.25) * size > (qj + 1) / 2:
                report["conditions_f"].append({"path": i, "j": j, "size": size, "needed": (qj + 1) / 2})
            if not size > 4 * root * chain.size:
                report["conditions_g"].append({"path": i, "j": j, "size": size, "needed": 4 * root * chain.size})

        def typical_towards(j, j2):
            wj, w2 = w_sets[j], w_sets[j2]
            n2 = w2.bit_count()
            nj = wj.bit_count()
            if not nj or not n2:
                return 0
            d = sum((masks[v] & w2).bit_count() for v in iter_bits(wj)) / (nj * n2)
            need = (d - root) * n2
            return sum(1 << v for v in iter_bits(wj) if (masks[v] & w2).bit_count() >= need - 1e-12)

        eligible = [0] * (ell + 1)
        for j in range(2, ell):
            e = w_sets[j]
            if j >= 3:
                e &= typical_towards(j, j - 1)
            if j <= ell - 2:
                e &= typical_towards(j, j + 1)
            eligible[j] = e
        w = [None] * (ell + 1)
        w[1], w[ell] = a, b
        for j in range(2, ell):
            cand = eligible[j]
            if j % 2 == 0:
                cand &= masks[w[j - 1]]
            elif j + 1 <= ell - 1:
                cand = sum(1 << v for v in iter_bits(cand) if masks[v] & eligible[j + 1])
            if not cand:
                raise EmbeddingFailure(f"path {i}: no admissible waypoint in cluster {j}")
            w[j] = (cand & -cand).bit_length() - 1
        path = [a]
        for j in range(1, ell):
            qj = q[j - 1]
            if qj == 1:
                if not host.has_edge(w[j], w[j + 1]):
                    raise EmbeddingFailure(f"path {i}: waypoints {j} and {j + 1} are not adjacent")
                path.append(w[j + 1])
                continue
            seg = pair_path_embed(host, list(iter_bits(w_sets[j])), list(iter_bits(w_sets[j + 1])),
                                  w[j], w[j + 1], qj, budget=50 * qj + 2000)
            if seg is None:
                raise EmbeddingFailure(f"path {i}: no segment of length {qj} between clusters {j} and {j + 1}")
            path.extend(seg[1:])
        for v in path[1:-1]:
            used |= 1 << v
        paths.append(path)
        waypoints.append(w[1:])
    return ChainEmbedding(paths, waypoints, report)


def _truncate(mask: int, size: int) -> int:
    """Keep the ``size`` lowest-labelled members of ``mask``."""
    out = 0
    for v in iter_bits(mask):
        if size == 0:
            break
        out |= 1 << v
        size -= 1
    return out


def chain_violations(chain: ClusterChain, specs, alloc: ChunkAllocation, emb: ChainEmbedding) -> list[str]:
    """The four output conditions, plus waypoint positions, checked from scratch."""
    out = []
    host = chain.host
    ends = set(chain.cluster(1)) | set(chain.cluster(chain.ell))
    anchors = {v for s in specs for v in (s.start, s.end)}
    seen = set()
    for i, (spec, path) in enumerate(zip(specs, emb.paths)):
        if len(path) - 1 != spec.length:
            out.append(f"path {i} has {len(path) - 1} edges, not {spec.length}")
        if path[0] != spec.start or path[-1] != spec.end:
            out.append(f"path {i} does not join its anchors")
        for u, v in zip(path, path[1:]):
            if not host.has_edge(u, v):
                out.append(f"path {i} uses the non-edge {u}-{v}")
        inner = path[1:-1]
        if len(set(inner)) != len(inner):
            out.append(f"path {i} repeats a vertex")
        if set(inner) & seen:
            out.append(f"path {i} meets an earlier path")
        seen |= set(inner)
        if set(inner) & (ends | anchors):
            out.append(f"path {i} uses V_1 or V_ell inside")
        pos = 0
        for j in range(1, chain.ell + 1):
            if path[pos] not in chain.cluster(j):
                out.append(f"path {i}: waypoint {j} is not in V_{j}")
            if j < chain.ell:
                pos += alloc.q[i][j - 1]
    return out
