"""graph6 and JSON encodings for graphs, chord sets and colourings.

The hex archival form of a 2-colouring lists one bit per pair in
lexicographic order ((0,1), (0,2), ..., (N-2,N-1)), 1 meaning red, padded
on the right with zeros to a multiple of four bits.
"""

from __future__ import annotations

import json
import re

from .errors import InvalidInput
from .graph import ChordSet, SimpleGraph, build_chorded_cycle


def _n_to_bytes(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n < 68719476736:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise InvalidInput("graph too large for graph6")


def to_graph6(g: SimpleGraph) -> str:
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    bits += [0] * (-len(bits) % 6)
    body = bytes(63 + int("".join(map(str, bits[k:k + 6])), 2) for k in range(0, len(bits), 6))
    return (_n_to_bytes(g.n) + body).decode("ascii")


def from_graph6(s: str) -> SimpleGraph:
    data = s.strip()
    if data.startswith(">>graph6<<"):
        data = data[10:]
    raw = data.encode("ascii")
    if not raw or any(b < 63 or b > 126 for b in raw):
        raise InvalidInput(f"not a graph6 string: {s!r}")
    if raw[0] != 126:
        n, rest = raw[0] - 63, raw[1:]
    elif len(raw) > 1 and raw[1] != 126:
        if len(raw) < 4:
            raise InvalidInput("truncated graph6 header")
        n = 0
        for b in raw[1:4]:
            n = (n << 6) | (b - 63)
        rest = raw[4:]
    else:
        if len(raw) < 8:
            raise InvalidInput("truncated graph6 header")
        n = 0
        for b in raw[2:8]:
            n = (n << 6) | (b - 63)
        rest = raw[8:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(rest) != need:
        raise InvalidInput(f"graph6 body has {len(rest)} bytes, expected {need}")
    bits = []
    for b in rest:
        v = b - 63
        bits.extend((v >> s) & 1 for s in range(5, -1, -1))
    edges = set()
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.add((i, j))
            k += 1
    return SimpleGraph(n, frozenset(edges))


def graph_to_json(g: SimpleGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def graph_from_json(obj: dict) -> SimpleGraph:
    try:
        return SimpleGraph(int(obj["n"]), frozenset(tuple(e) for e in obj["edges"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"bad graph JSON: {exc}") from exc


def chords_to_json(d: ChordSet) -> dict:
    return {"n": d.n, "chords": [list(c) for c in sorted(d.chords)]}


def chords_from_json(obj: dict) -> ChordSet:
    try:
        return ChordSet.of(int(obj["n"]), [tuple(c) for c in obj["chords"]])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad chord-set JSON: {exc}") from exc


def bits_to_hex(bits: list[int]) -> str:
    if not bits:
        return ""
    padded = bits + [0] * (-len(bits) % 4)
    return "".join("%x" % int("".join(map(str, padded[k:k + 4])), 2) for k in range(0, len(padded), 4))


def hex_to_bits(h: str, count: int) -> list[int]:
    if len(h) != (count + 3) // 4:
        raise InvalidInput(f"hex string of length {len(h)} cannot hold {count} bits")
    bits = []
    for ch in h:
        v = int(ch, 16)
        bits.extend((v >> s) & 1 for s in (3, 2, 1, 0))
    if any(bits[count:]):
        raise InvalidInput("nonzero padding in hex colouring")
    return bits[:count]


_SHORTHAND = re.compile(r"^C(\d+)((?:\+\d+-\d+)*)$")


def parse_graph_spec(spec: str) -> SimpleGraph:
    """Parse ``C<n>(+<u>-<v>)*``, a JSON object or file, or a graph6 string."""
    s = spec.strip()
    m = _SHORTHAND.match(s)
    if m:
        n = int(m.group(1))
        chords = [tuple(int(x) for x in part.split("-")) for part in m.group(2).split("+") if part]
        return build_chorded_cycle(n, ChordSet.of(n, chords))
    if s.startswith("{"):
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"bad JSON graph: {exc}") from exc
        if "chords" in obj:
            d = chords_from_json(obj)
            return build_chorded_cycle(d.n, d)
        return graph_from_json(obj)
    if s.endswith(".json"):
        try:
            with open(s) as fh:
                return parse_graph_spec(fh.read())
        except OSError as exc:
            raise InvalidInput(str(exc)) from exc
    return from_graph6(s)


def format_shorthand(g: SimpleGraph) -> str | None:
    from .graph import chords_of

    try:
        d = chords_of(g)
    except InvalidInput:
        return None
    return f"C{g.n}" + "".join(f"+{u}-{v}" for u, v in sorted(d.chords))
