"""Red/blue colourings of complete graphs."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import InvalidInput
from .formats import bits_to_hex, hex_to_bits
from .graph import Embedding, SimpleGraph, find_subgraph

RED = "red"
BLUE = "blue"


@dataclass(frozen=True)
class ColoredCompleteGraph:
    """2-colouring of K_N stored as its red graph; every other pair is blue."""

    red: SimpleGraph

    @classmethod
    def from_red_edges(cls, N: int, red_edges: Iterable[tuple[int, int]]) -> "ColoredCompleteGraph":
        return cls(SimpleGraph(N, frozenset(tuple(e) for e in red_edges)))

    @classmethod
    def from_masks(cls, red_masks) -> "ColoredCompleteGraph":
        return cls(SimpleGraph.from_masks(list(red_masks)))

    @property
    def N(self) -> int:
        return self.red.n

    @cached_property
    def blue(self) -> SimpleGraph:
        return self.red.complement()

    def color(self, u: int, v: int) -> str:
        if u == v or not (0 <= u < self.N and 0 <= v < self.N):
            raise InvalidInput(f"({u},{v}) is not an edge of K_{self.N}")
        return RED if self.red.has_edge(u, v) else BLUE

    def subgraph(self, colour: str) -> SimpleGraph:
        if colour == RED:
            return self.red
        if colour == BLUE:
            return self.blue
        raise InvalidInput(f"unknown colour {colour!r}")

    def swapped(self) -> "ColoredCompleteGraph":
        return ColoredCompleteGraph(self.blue)

    def bits(self) -> list[int]:
        N = self.N
        return [1 if self.red.has_edge(u, v) else 0 for u in range(N) for v in range(u + 1, N)]

    def to_hex(self) -> str:
        return bits_to_hex(self.bits())

    @classmethod
    def from_hex(cls, N: int, h: str) -> "ColoredCompleteGraph":
        bits = hex_to_bits(h, N * (N - 1) // 2)
        pairs = [(u, v) for u in range(N) for v in range(u + 1, N)]
        return cls.from_red_edges(N, [p for p, b in zip(pairs, bits) if b])

    def to_json(self) -> dict:
        return {"N": self.N, "red_edges": [list(e) for e in self.red.sorted_edges()]}

    @classmethod
    def from_json(cls, obj: dict) -> "ColoredCompleteGraph":
        try:
            return cls.from_red_edges(int(obj["N"]), [tuple(e) for e in obj["red_edges"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad colouring JSON: {exc}") from exc


def mono_copy(c: ColoredCompleteGraph, h: SimpleGraph, *, node_limit: int | None = None) -> tuple[str, Embedding] | None:
    """A monochromatic copy of ``h``: red is searched first, then blue."""
    if h.n > c.N:
        return None
    for colour in (RED, BLUE):
        emb = find_subgraph(h, c.subgraph(colour), node_limit=node_limit)
        if emb is not None:
            return colour, emb
    return None
