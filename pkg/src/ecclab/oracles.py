"""Exact ground truth on desk-scale graphs.

Everything here is exhaustive or branch-and-bound and returns provably
optimal answers; when a search budget runs out the caller gets
``BudgetExceeded`` rather than a guess.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from itertools import combinations

from .graph import Clique, CliqueCover, Graph, bits, to_mask

log = logging.getLogger(__name__)

DEFAULT_ECC_BUDGET = 500_000


class BudgetExceeded(RuntimeError):
    """The exact search hit its node limit before proving optimality."""

    def __init__(self, nodes: int, best_size: int | None = None):
        self.nodes = nodes
        self.best_size = best_size
        super().__init__(f"search budget of {nodes} nodes exceeded (best so far: {best_size})")


def _above(v: int) -> int:
    """Mask that clears bits 0..v."""
    return ~((1 << (v + 1)) - 1)


# --------------------------------------------------------------------------
# maximum clique


def _color_sort(P: int, adj: tuple[int, ...] | list[int]) -> tuple[list[int], list[int]]:
    """Greedy sequential coloring of P; colors[i] bounds the clique within order[:i+1]."""
    order: list[int] = []
    colors: list[int] = []
    color = 0
    uncolored = P
    while uncolored:
        color += 1
        Q = uncolored
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            order.append(v)
            colors.append(color)
            uncolored ^= low
            Q &= ~low & ~adj[v]
    return order, colors


def _max_clique_mask(adj, P: int, target: int | None = None) -> int:
    """Bitmask of a maximum clique inside P (or any clique of size >= target)."""
    best = [0, 0]  # size, mask
    goal = target if target is not None else math.inf

    class _Done(Exception):
        pass

    def expand(size: int, R: int, P: int) -> None:
        order, colors = _color_sort(P, adj)
        for i in range(len(order) - 1, -1, -1):
            if size + colors[i] <= best[0]:
                return
            v = order[i]
            bit = 1 << v
            nxt = P & adj[v]
            if nxt:
                expand(size + 1, R | bit, nxt)
            elif size + 1 > best[0]:
                best[0], best[1] = size + 1, R | bit
                if best[0] >= goal:
                    raise _Done
            P &= ~bit

    if P:
        try:
            expand(0, 0, P)
        except _Done:
            pass
    return best[1]


def clique_number_within(g: Graph, within: int | None = None) -> int:
    P = g.vertex_mask if within is None else within
    return _max_clique_mask(g.adj, P).bit_count()


def _has_clique_of_size(adj, P: int, k: int) -> bool:
    if k <= 0:
        return True
    if P.bit_count() < k:
        return False
    return _max_clique_mask(adj, P, target=k).bit_count() >= k


def max_clique_in(g: Graph, within: int | None = None) -> tuple[int, ...]:
    """Lexicographically smallest maximum clique of ``g`` restricted to ``within``."""
    P = g.vertex_mask if within is None else within
    k = _max_clique_mask(g.adj, P).bit_count()
    chosen = []
    while k > 0:
        for v in bits(P):
            cand = P & g.adj[v] & _above(v)
            if _has_clique_of_size(g.adj, cand, k - 1):
                chosen.append(v)
                P = cand
                k -= 1
                break
        else:  # pragma: no cover - a k-clique is guaranteed to exist in P
            raise AssertionError("lost track of the maximum clique")
    return tuple(chosen)


def max_clique_exact(g: Graph) -> tuple[int, ...]:
    """A maximum clique (lexicographically smallest among maxima)."""
    return max_clique_in(g)


def max_stable_exact(g: Graph) -> tuple[int, ...]:
    return max_clique_in(g.complement())


def clique_number(g: Graph) -> int:
    return clique_number_within(g)


def independence_number(g: Graph) -> int:
    return clique_number_within(g.complement())


# --------------------------------------------------------------------------
# clique enumeration and counting


def _degeneracy_order(g: Graph) -> list[int]:
    deg = g.degrees()
    remaining = g.vertex_mask
    order = []
    while remaining:
        v = min(bits(remaining), key=lambda x: (deg[x], x))
        order.append(v)
        remaining &= ~(1 << v)
        for u in bits(g.adj[v] & remaining):
            deg[u] -= 1
    return order


def maximal_cliques(g: Graph) -> list[tuple[int, ...]]:
    """All maximal cliques, each sorted, the list in lexicographic order.

    Bron-Kerbosch with Tomita pivoting; top level follows a degeneracy order.
    """
    adj = g.adj
    out: list[tuple[int, ...]] = []

    def expand(R: int, P: int, X: int) -> None:
        if not P:
            if not X:
                out.append(tuple(bits(R)))
            return
        pivot = max(bits(P | X), key=lambda u: ((P & adj[u]).bit_count(), -u))
        for v in bits(P & ~adj[pivot]):
            bit = 1 << v
            expand(R | bit, P & adj[v], X & adj[v])
            P &= ~bit
            X |= bit

    P = g.vertex_mask
    X = 0
    for v in _degeneracy_order(g):
        bit = 1 << v
        expand(bit, P & adj[v], X & adj[v])
        P &= ~bit
        X |= bit
    out.sort()
    return out


def count_cliques_within(adj, P: int, r: int) -> int:
    """Number of r-vertex cliques inside vertex mask P."""
    if r == 0:
        return 1
    if r == 1:
        return P.bit_count()
    if r == 2:
        return sum((P & adj[v] & _above(v)).bit_count() for v in bits(P))
    total = 0
    for v in bits(P):
        nxt = P & adj[v] & _above(v)
        if nxt.bit_count() >= r - 1:
            total += count_cliques_within(adj, nxt, r - 1)
    return total


def count_cliques(g: Graph, r: int) -> int:
    return count_cliques_within(g.adj, g.vertex_mask, r)


def count_stable_sets(g: Graph, r: int) -> int:
    return count_cliques(g.complement(), r)


def _first_clique_of_size(adj, P: int, r: int) -> int | None:
    """Lexicographically first r-clique inside P as a mask."""
    if r == 0:
        return 0
    for v in bits(P):
        nxt = P & adj[v] & _above(v)
        if nxt.bit_count() < r - 1:
            continue
        rest = _first_clique_of_size(adj, nxt, r - 1)
        if rest is not None:
            return rest | (1 << v)
    return None


def _cliques_of_size(adj, P: int, r: int):
    if r == 0:
        yield 0
        return
    for v in bits(P):
        nxt = P & adj[v] & _above(v)
        if nxt.bit_count() >= r - 1:
            for rest in _cliques_of_size(adj, nxt, r - 1):
                yield rest | (1 << v)


# --------------------------------------------------------------------------
# induced complete bipartite subgraphs


def find_induced_kst(g: Graph, s: int, t: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Disjoint stable sets A (|A| = s), B (|B| = t) fully joined to each other, or None."""
    if s < 0 or t < 0 or s + t < 1:
        raise ValueError(f"need s, t >= 0 with s + t >= 1, got s={s} t={t}")
    if t == 0 or s == 0:
        size = s or t
        stable = max_stable_exact(g)
        if len(stable) < size:
            return None
        side = stable[:size]
        return (side, ()) if t == 0 else ((), side)
    comp = g.complement().adj
    for a_mask in _cliques_of_size(comp, g.vertex_mask, s):
        common = g.vertex_mask
        for a in bits(a_mask):
            common &= g.adj[a]
        if common.bit_count() < t:
            continue
        b_mask = _first_clique_of_size(comp, common, t)
        if b_mask is not None:
            return tuple(bits(a_mask)), tuple(bits(b_mask))
    return None


def contains_induced_kst(g: Graph, s: int, t: int) -> bool:
    return find_induced_kst(g, s, t) is not None


# --------------------------------------------------------------------------
# minimum edge clique cover


def min_ecc_exact(g: Graph, budget: int = DEFAULT_ECC_BUDGET) -> CliqueCover:
    """A provably minimum edge clique cover.

    Restricting to maximal cliques loses nothing, so this is minimum set cover
    of the edges by maximal cliques.  Branching always happens on the uncovered
    edge with the fewest covering cliques; the bound packs uncovered edges no
    two of which share a covering clique.  Raises ``BudgetExceeded`` after
    ``budget`` search nodes.
    """
    edges = g.edges()
    if not edges:
        return CliqueCover(graph_hash=g.content_hash())
    eindex = {e: i for i, e in enumerate(edges)}
    cliques = [c for c in maximal_cliques(g) if len(c) >= 2]
    cmask = []
    for c in cliques:
        m = 0
        for e in combinations(c, 2):
            m |= 1 << eindex[e]
        cmask.append(m)
    covering: list[list[int]] = [[] for _ in edges]
    for j, m in enumerate(cmask):
        for i in bits(m):
            covering[i].append(j)
    cover_bits = [to_mask(js) for js in covering]
    edge_order = sorted(range(len(edges)), key=lambda i: (len(covering[i]), i))

    best = _greedy_set_cover(cmask, (1 << len(edges)) - 1)
    nodes = 0

    def lower_bound(uncovered: int) -> int:
        used = 0
        lb = 0
        for i in edge_order:
            if uncovered >> i & 1 and not cover_bits[i] & used:
                lb += 1
                used |= cover_bits[i]
        return lb

    def dfs(uncovered: int, chosen: list[int]) -> None:
        nonlocal nodes, best
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(budget, len(best))
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + lower_bound(uncovered) >= len(best):
            return
        pivot = next(i for i in edge_order if uncovered >> i & 1)
        options = sorted(covering[pivot], key=lambda j: (-(cmask[j] & uncovered).bit_count(), j))
        for j in options:
            chosen.append(j)
            dfs(uncovered & ~cmask[j], chosen)
            chosen.pop()

    dfs((1 << len(edges)) - 1, [])
    chosen = sorted(cliques[j] for j in best)
    return CliqueCover(
        tuple(Clique(c) for c in chosen), ("exact",) * len(chosen), g.content_hash()
    )


def _greedy_set_cover(cmask: list[int], universe: int) -> list[int]:
    chosen = []
    left = universe
    while left:
        j = max(range(len(cmask)), key=lambda j: ((cmask[j] & left).bit_count(), -j))
        chosen.append(j)
        left &= ~cmask[j]
    return chosen


def min_ecc_size(g: Graph, budget: int = DEFAULT_ECC_BUDGET) -> int:
    return min_ecc_exact(g, budget).size


# --------------------------------------------------------------------------
# Ramsey-type witnesses


@dataclass(frozen=True)
class RamseyWitness:
    """A graph with no stable set of size ``s`` and clique number ``omega``."""

    graph: Graph
    s: int
    omega: int
    seed: int | None = None
    iterations_used: int = 0

    def certify(self) -> bool:
        return independence_number(self.graph) < self.s and clique_number(self.graph) == self.omega


def _balanced_density(n: int, s: int, k: int) -> float:
    """Edge probability equalizing expected stable s-sets and k-cliques."""
    stable_w = math.comb(n, s)
    clique_w = math.comb(n, k)

    def excess(p: float) -> float:
        return stable_w * (1 - p) ** math.comb(s, 2) - clique_w * p ** math.comb(k, 2)

    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def ramsey_search(
    n: int,
    s: int,
    max_omega: int,
    seed: int = 0,
    max_iters: int = 20_000,
    max_sideways: int = 50,
    tabu: int = 3,
) -> RamseyWitness | None:
    """Local search for a graph on ``n`` vertices with alpha < s and omega <= max_omega.

    Objective: (# stable s-sets) + (# cliques of size max_omega + 1).  Each
    iteration toggles the edge with the best objective change (ties by
    canonical edge order).  Zero-change moves are taken at most
    ``max_sideways`` times in a row, with the last ``tabu`` toggled pairs
    frozen; a stuck search toggles a random violating pair.  Deterministic
    given ``seed``.  Returns None if ``max_iters`` toggles do not suffice.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if s < 2:
        raise ValueError("s must be at least 2")
    k = max_omega + 1
    rng = random.Random(seed)
    p = _balanced_density(n, s, k)
    full = (1 << n) - 1
    adj = [0] * n
    for u, v in combinations(range(n), 2):
        if rng.random() < p:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    comp = [full & ~adj[v] & ~(1 << v) for v in range(n)]
    pairs = list(combinations(range(n), 2))

    def toggle(u: int, v: int) -> None:
        adj[u] ^= 1 << v
        adj[v] ^= 1 << u
        comp[u] ^= 1 << v
        comp[v] ^= 1 << u

    def delta(u: int, v: int) -> int:
        cliques_through = count_cliques_within(adj, adj[u] & adj[v], k - 2) if k >= 2 else 0
        stables_through = count_cliques_within(comp, comp[u] & comp[v], s - 2)
        if adj[u] >> v & 1:
            return stables_through - cliques_through
        return cliques_through - stables_through

    def objective() -> int:
        return count_cliques_within(comp, full, s) + count_cliques_within(adj, full, k)

    def finish(iters: int) -> RamseyWitness | None:
        g = Graph(n, tuple(adj))
        if independence_number(g) >= s:
            return None
        omega = clique_number(g)
        if omega > max_omega:
            return None
        return RamseyWitness(g, s, omega, seed, iters)

    score = objective()
    recent: list[tuple[int, int]] = []
    sideways = 0
    for it in range(max_iters):
        if score == 0:
            return finish(it)
        best_pair = None
        best_delta = None
        for pair in pairs:
            if pair in recent:
                continue
            d = delta(*pair)
            if best_delta is None or d < best_delta:
                best_pair, best_delta = pair, d
        if best_delta is not None and (best_delta < 0 or (best_delta == 0 and sideways < max_sideways)):
            sideways = sideways + 1 if best_delta == 0 else 0
            move = best_pair
        else:
            sideways = 0
            move = _random_violating_pair(rng, adj, comp, full, s, k) or rng.choice(pairs)
            best_delta = delta(*move)
        toggle(*move)
        score += best_delta
        recent.append(move)
        if len(recent) > tabu:
            recent.pop(0)
    if score == 0:
        return finish(max_iters)
    log.debug("ramsey_search(n=%d, s=%d, max_omega=%d) failed, objective %d", n, s, max_omega, score)
    return None


def _random_violating_pair(rng: random.Random, adj, comp, full: int, s: int, k: int):
    bad = [m for m in _cliques_of_size(comp, full, s)]
    bad += [m for m in _cliques_of_size(adj, full, k)] if k >= 1 else []
    if not bad:
        return None
    members = list(bits(rng.choice(bad)))
    if len(members) < 2:
        return None
    u, v = rng.sample(members, 2)
    return (min(u, v), max(u, v))
