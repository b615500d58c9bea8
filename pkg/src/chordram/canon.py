"""Canonical labelling of small graphs (individualise-refine with orbit pruning).

Good enough for the 2-colourings of K_N, N <= 13, met by the Ramsey search.
The canonical code is the largest adjacency bitstring (pairs in
lexicographic order, first pair most significant) over all leaves of the
search tree.
"""

from __future__ import annotations

from typing import Sequence


def _refine(cells: list[list[int]], masks: Sequence[int]) -> list[list[int]]:
    while True:
        cms = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            cms.append(m)
        out = []
        changed = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            sig = {v: tuple((masks[v] & cm).bit_count() for cm in cms) for v in c}
            keys = sorted(set(sig.values()))
            if len(keys) == 1:
                out.append(c)
                continue
            changed = True
            for key in keys:
                out.append([v for v in c if sig[v] == key])
        cells = out
        if not changed:
            return cells


def code_of(masks: Sequence[int], order: Sequence[int]) -> int:
    """Adjacency bitstring of the graph relabelled so that ``order[i]`` -> i."""
    n = len(order)
    code = 0
    for i in range(n):
        mi = masks[order[i]]
        for j in range(i + 1, n):
            code = (code << 1) | ((mi >> order[j]) & 1)
    return code


def masks_of(code: int, n: int) -> list[int]:
    masks = [0] * n
    shift = n * (n - 1) // 2
    for i in range(n):
        for j in range(i + 1, n):
            shift -= 1
            if code >> shift & 1:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def _orbit_rep(v: int, gens: list[list[int]]) -> int:
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return min(seen)


def canonical_form(masks: Sequence[int]) -> tuple[int, list[int]]:
    """Return ``(code, order)``: the canonical code and a vertex order attaining it."""
    n = len(masks)
    if n <= 1:
        return 0, list(range(n))
    degs = [m.bit_count() for m in masks]
    init: dict[int, list[int]] = {}
    for v in range(n):
        init.setdefault(degs[v], []).append(v)
    cells = [init[d] for d in sorted(init)]
    best_code = -1
    best_order: list[int] = []
    autos: list[list[int]] = []

    def search(cells, prefix):
        nonlocal best_code, best_order
        cells = _refine(cells, masks)
        idx = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if idx is None:
            order = [c[0] for c in cells]
            code = code_of(masks, order)
            if code > best_code:
                best_code, best_order = code, order
            elif code == best_code:
                gamma = [0] * n
                for a, b in zip(best_order, order):
                    gamma[a] = b
                autos.append(gamma)
            return
        cell = cells[idx]
        tried: list[int] = []
        for v in sorted(cell):
            if tried:
                # automorphisms fixing the prefix pointwise map subtrees onto each other
                gens = [g for g in autos if all(g[p] == p for p in prefix)]
                if gens:
                    rv = _orbit_rep(v, gens)
                    if any(_orbit_rep(t, gens) == rv for t in tried):
                        continue
            tried.append(v)
            rest = [w for w in cell if w != v]
            search(cells[:idx] + [[v], rest] + cells[idx + 1:], prefix + [v])

    search(cells, [])
    return best_code, best_order


def canonical_colouring_code(red: Sequence[int]) -> int:
    """Canonical code of a 2-colouring of K_n, invariant under recolouring.

    The colour class with more edges is labelled red; on a tie both choices
    are canonised and the larger code wins.
    """
    n = len(red)
    full = (1 << n) - 1
    blue = [full & ~m & ~(1 << v) for v, m in enumerate(red)]
    er = sum(m.bit_count() for m in red)
    eb = n * (n - 1) - er
    if er > eb:
        return canonical_form(red)[0]
    if eb > er:
        return canonical_form(blue)[0]
    return max(canonical_form(red)[0], canonical_form(blue)[0])
