"""Instance families: small named graphs, random graphs, C4-free incidence
graphs and the doubled-Ramsey-graph lower-bound construction."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations, product

from .graph import Graph, build_graph
from .oracles import RamseyWitness, clique_number, independence_number


def complete_graph(n: int) -> Graph:
    return build_graph(n, combinations(range(n), 2))


def empty_graph(n: int) -> Graph:
    return build_graph(n, [])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(10, outer + spokes + inner)


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with sides 0..a-1 and a..a+b-1."""
    if a < 0 or b < 0:
        raise ValueError("side sizes must be non-negative")
    return build_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def random_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p): pairs visited in lexicographic order, one RNG draw each."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    return build_graph(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def random_triangle_free(n: int, seed: int) -> Graph:
    """Random maximal-ish triangle-free graph: shuffled pairs, each kept with
    a random density if it closes no triangle."""
    rng = random.Random(seed)
    keep = rng.uniform(0.3, 1.0)
    pairs = list(combinations(range(n), 2))
    rng.shuffle(pairs)
    adj = [0] * n
    edges = []
    for u, v in pairs:
        if adj[u] & adj[v] or rng.random() > keep:
            continue
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        edges.append((u, v))
    return build_graph(n, edges)


def join(a: Graph, b: Graph) -> Graph:
    """Disjoint union of ``a`` and ``b`` (b shifted by a.n) plus every cross pair."""
    edges = a.edges() + [(u + a.n, v + a.n) for u, v in b.edges()]
    edges += [(u, a.n + v) for u in range(a.n) for v in range(b.n)]
    return build_graph(a.n + b.n, edges)


def is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))


def _projective_points(q: int) -> list[tuple[int, int, int]]:
    """Nonzero triples over Z_q normalized so the first nonzero entry is 1."""
    pts = []
    for x in product(range(q), repeat=3):
        lead = next((c for c in x if c), 0)
        if lead == 1:
            pts.append(x)
    return pts


def incidence_c4free(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q) for prime q.

    Points are vertices 0..N-1, lines N..2N-1 with N = q^2 + q + 1; a point
    lies on a line when their representatives are orthogonal mod q.
    """
    if not is_prime(q):
        raise ValueError(f"q must be a prime >= 2, got {q}")
    pts = _projective_points(q)
    N = len(pts)
    edges = [
        (i, N + j)
        for i, p in enumerate(pts)
        for j, line in enumerate(pts)
        if (p[0] * line[0] + p[1] * line[1] + p[2] * line[2]) % q == 0
    ]
    return build_graph(2 * N, edges)


@dataclass(frozen=True)
class LowerBoundInstance:
    """Two fully joined copies of a certified Ramsey witness J.

    A clique of the join is a clique of one copy plus a clique of the other,
    so it covers at most omega(J)^2 of the m^2 cross edges; hence every
    clique cover needs at least ceil(m^2 / omega(J)^2) cliques.
    """

    base: RamseyWitness
    joined: Graph
    cross_edges: int
    clique_cross_cap: int
    cover_lower_bound: int

    @property
    def m(self) -> int:
        return self.base.graph.n


def join_lowerbound(base: RamseyWitness) -> LowerBoundInstance:
    if not base.certify():
        raise ValueError(
            f"witness not certified: need alpha < {base.s} and omega == {base.omega}, "
            f"got alpha={independence_number(base.graph)} omega={clique_number(base.graph)}"
        )
    m = base.graph.n
    cap = base.omega**2
    return LowerBoundInstance(
        base=base,
        joined=join(base.graph, base.graph),
        cross_edges=m * m,
        clique_cross_cap=cap,
        cover_lower_bound=-(-m * m // cap) if cap else 0,
    )
