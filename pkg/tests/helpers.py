"""Brute-force reference oracles and the shared test corpus.

Everything here works on plain edge sets with itertools so it stays
independent of the bitset code under test.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from hypothesis import strategies as st

from ecclab import CoverParams, build_graph, run_algorithm
from ecclab.generators import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    empty_graph,
    incidence_c4free,
    petersen_graph,
    random_gnp,
    random_triangle_free,
    star_graph,
)


def edge_set(g):
    return {frozenset(e) for e in g.edges()}


def brute_is_clique(es, vs):
    return all(frozenset(p) in es for p in combinations(vs, 2))


def brute_clique_number(g):
    es = edge_set(g)
    best = 0 if g.n == 0 else 1
    for k in range(2, g.n + 1):
        if any(brute_is_clique(es, vs) for vs in combinations(range(g.n), k)):
            best = k
        else:
            break
    return best


def brute_independence_number(g):
    return brute_clique_number(g.complement())


def brute_min_ecc(g):
    """Smallest k such that some k cliques (of any size >= 2) cover every edge."""
    es = edge_set(g)
    if not es:
        return 0
    cliques = []
    for k in range(2, g.n + 1):
        found = [frozenset(vs) for vs in combinations(range(g.n), k) if brute_is_clique(es, vs)]
        if not found:
            break
        cliques.extend(found)
    covers = [{frozenset(p) for p in combinations(sorted(c), 2)} for c in cliques]
    for k in range(1, len(es) + 1):
        for combo in combinations(covers, k):
            if set().union(*combo) >= es:
                return k
    raise AssertionError("edges always cover themselves")


def brute_has_induced_kst(g, s, t):
    es = edge_set(g)
    V = range(g.n)
    for A in combinations(V, s):
        if any(frozenset(p) in es for p in combinations(A, 2)):
            continue
        rest = [v for v in V if v not in A]
        for B in combinations(rest, t):
            if any(frozenset(p) in es for p in combinations(B, 2)):
                continue
            if all(frozenset((a, b)) in es for a in A for b in B):
                return True
    return False


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return build_graph(n, chosen)


# -- algorithm variants exercised by the property suites ----------------------

VARIANTS = {
    "quadratic": ("quadratic", CoverParams()),
    "threshold/faithful": ("threshold", CoverParams(3, 2, "faithful")),
    "threshold/practical": ("threshold", CoverParams(3, 2, "practical")),
    "peel22/faithful": ("peel22", CoverParams(mode="faithful")),
    "peel22/practical": ("peel22", CoverParams(mode="practical")),
    "peel23/faithful": ("peel23", CoverParams(mode="faithful")),
    "partition/faithful": ("partition-product", CoverParams(3, mode="faithful")),
    "partition/practical": ("partition-product", CoverParams(4, mode="practical")),
}


def run_variant(name, g):
    algo, params = VARIANTS[name]
    return run_algorithm(algo, g, params)


# -- corpus --------------------------------------------------------------------


@lru_cache(maxsize=None)
def corpus():
    """Deterministic list of (label, graph) pairs: named graphs plus G(n,p)."""
    out = [("empty0", empty_graph(0)), ("empty1", empty_graph(1)), ("petersen", petersen_graph())]
    out += [(f"K{n}", complete_graph(n)) for n in range(1, 9)]
    out += [(f"C{n}", cycle_graph(n)) for n in range(3, 11)]
    out += [(f"star{k}", star_graph(k)) for k in range(1, 7)]
    out += [(f"K{a},{b}", complete_bipartite(a, b)) for a in range(0, 5) for b in range(a, 5)]
    out += [(f"pg{q}", incidence_c4free(q)) for q in (2, 3)]
    out += [(f"tf{n}/{s}", random_triangle_free(n, s)) for n in range(4, 13) for s in range(4)]
    seed = 0
    for n in range(2, 25):
        for p in (0.1, 0.3, 0.5, 0.7, 0.9):
            reps = 8 if n <= 10 else 4
            for _ in range(reps):
                out.append((f"gnp{n}/{p}/{seed}", random_gnp(n, p, seed)))
                seed += 1
    return tuple(out)
