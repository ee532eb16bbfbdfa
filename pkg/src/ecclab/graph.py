"""Immutable bitset graphs and the clique / cover value types built on them.

Vertices are the dense integers ``0..n-1``.  ``adj[v]`` is an int whose bit
``u`` is set iff ``uv`` is an edge.  Edges are always reported as ``(min, max)``
pairs in lexicographic order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, slots=True)
class Graph:
    """Simple undirected graph on ``0..n-1`` with per-vertex neighbor bitsets."""

    n: int
    adj: tuple[int, ...]
    edge_count: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise ValueError(f"adjacency has {len(self.adj)} rows for n={self.n}")
        full = (1 << self.n) - 1
        degree_sum = 0
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"vertex {v} has a neighbor outside 0..{self.n - 1}")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for u in bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v}, {u})")
            degree_sum += row.bit_count()
        object.__setattr__(self, "edge_count", degree_sum // 2)

    # -- queries -----------------------------------------------------------

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def edges(self) -> list[Edge]:
        """All edges as sorted ``(u, v)`` pairs with ``u < v``."""
        out = []
        for u, row in enumerate(self.adj):
            out.extend((u, v) for v in bits(row >> (u + 1) << (u + 1)))
        return out

    def complement(self) -> Graph:
        full = self.vertex_mask
        return Graph(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj)))

    def induced(self, vertices: Sequence[int]) -> Graph:
        """Induced subgraph relabeled so ``vertices[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            rows.append(to_mask(index[u] for u in bits(self.adj[v]) if u in index))
        return Graph(len(vertices), tuple(rows))

    def content_hash(self) -> str:
        """SHA-256 of the canonical edge-list text; identifies the instance."""
        from .io import format_edge_list

        return hashlib.sha256(format_edge_list(self).encode()).hexdigest()

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edge_count={self.edge_count})"


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from an edge list; duplicate and reversed pairs collapse."""
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    rows = [0] * n
    for pair in edges:
        u, v = pair
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) is not allowed")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


@dataclass(frozen=True, slots=True)
class Clique:
    """A sorted, duplicate-free vertex tuple; adjacency is checked by ``is_clique``."""

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(a >= b for a, b in zip(self.members, self.members[1:])):
            raise ValueError(f"clique members must be strictly increasing: {self.members}")

    @classmethod
    def of(cls, vertices: Iterable[int]) -> Clique:
        vs = sorted(vertices)
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate vertex in {vs}")
        return cls(tuple(vs))

    @classmethod
    def from_mask(cls, mask: int) -> Clique:
        return cls(tuple(bits(mask)))

    @property
    def mask(self) -> int:
        return to_mask(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def edges(self) -> list[Edge]:
        return list(combinations(self.members, 2))


@dataclass(frozen=True)
class CliqueCover:
    """An ordered collection of cliques, each tagged with the step that produced it."""

    cliques: tuple[Clique, ...] = ()
    provenance: tuple[str, ...] = ()
    graph_hash: str | None = None

    def __post_init__(self) -> None:
        if len(self.cliques) != len(self.provenance):
            raise ValueError("every clique needs exactly one provenance label")

    @property
    def size(self) -> int:
        return len(self.cliques)

    def __len__(self) -> int:
        return len(self.cliques)

    def to_lists(self) -> list[list[int]]:
        return [list(c.members) for c in self.cliques]


class CoverBuilder:
    """Mutable accumulator used by the algorithms; ``freeze`` yields a CliqueCover."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self._cliques: list[Clique] = []
        self._labels: list[str] = []

    def add(self, clique: Clique, label: str) -> None:
        self._cliques.append(clique)
        self._labels.append(label)

    def __len__(self) -> int:
        return len(self._cliques)

    def freeze(self) -> CliqueCover:
        return CliqueCover(tuple(self._cliques), tuple(self._labels), self.graph.content_hash())


@dataclass(frozen=True)
class CoverReport:
    valid: bool
    non_clique_indices: tuple[int, ...]
    uncovered_edges: tuple[Edge, ...]
    size: int


def _check_vertices(g: Graph, vs: Iterable[int]) -> None:
    for v in vs:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} outside 0..{g.n - 1}")


def is_clique(g: Graph, vs: Iterable[int]) -> bool:
    vs = list(vs)
    _check_vertices(g, vs)
    mask = to_mask(vs)
    return all(mask & ~(1 << v) & ~g.adj[v] == 0 for v in vs)


def validate_cover(g: Graph, cover: CliqueCover | Iterable[Iterable[int]]) -> CoverReport:
    """Report non-clique members and uncovered edges of ``cover`` against ``g``."""
    cliques = cover.cliques if isinstance(cover, CliqueCover) else [Clique.of(c) for c in cover]
    bad = []
    # residual[v]: neighbors of v whose edge is still uncovered
    residual = list(g.adj)
    for i, c in enumerate(cliques):
        _check_vertices(g, c.members)
        if not is_clique(g, c.members):
            bad.append(i)
            continue
        mask = c.mask
        for v in c.members:
            residual[v] &= ~mask
    uncovered = []
    for u, row in enumerate(residual):
        uncovered.extend((u, v) for v in bits(row >> (u + 1) << (u + 1)))
    return CoverReport(
        valid=not bad and not uncovered,
        non_clique_indices=tuple(bad),
        uncovered_edges=tuple(uncovered),
        size=len(cliques),
    )


def uncovered_subgraph(g: Graph, covered: Iterable[Sequence[int]]) -> Graph:
    """Same vertex set as ``g`` with the ``covered`` edges removed."""
    rows = list(g.adj)
    for u, v in covered:
        _check_vertices(g, (u, v))
        if not g.has_edge(u, v):
            raise ValueError(f"covered pair ({u}, {v}) is not an edge")
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
    return Graph(g.n, tuple(rows))
