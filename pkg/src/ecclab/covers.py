"""Constructive clique-cover procedures and the closed-form bounds they are judged by."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from .graph import Clique, CliqueCover, CoverBuilder, Graph, bits, is_clique, to_mask
from .oracles import _above, _color_sort, max_clique_in

FAITHFUL = "faithful"
PRACTICAL = "practical"
_MODE_ALIASES = {"faithful": FAITHFUL, "paper-faithful": FAITHFUL, "practical": PRACTICAL}


def _int_root_ceil(n: int, k: int) -> int:
    """Smallest integer r >= 0 with r**k >= n."""
    if n <= 0:
        return 0
    r = max(1, int(round(n ** (1.0 / k))))
    while r**k < n:
        r += 1
    while r > 1 and (r - 1) ** k >= n:
        r -= 1
    return r


@dataclass(frozen=True)
class CoverParams:
    """Parameters for the threshold, peeling and partition procedures.

    ``remainder_factor`` and ``partition_factor`` default to 4 and 1 in
    faithful mode and to 0 in practical mode, where 0 means "keep extracting
    maximum cliques until nothing is left".  ``mode`` also accepts the
    spelling "paper-faithful".
    """

    s: int = 3
    t: int = 2
    mode: str = FAITHFUL
    remainder_factor: float | None = None
    partition_factor: float | None = None

    def __post_init__(self) -> None:
        if self.s < 2:
            raise ValueError(f"s must be >= 2, got {self.s}")
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        if self.mode not in _MODE_ALIASES:
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "mode", _MODE_ALIASES[self.mode])
        faithful = self.mode == FAITHFUL
        if self.remainder_factor is None:
            object.__setattr__(self, "remainder_factor", 4.0 if faithful else 0.0)
        if self.partition_factor is None:
            object.__setattr__(self, "partition_factor", 1.0 if faithful else 0.0)
        if self.remainder_factor < 0 or self.partition_factor < 0:
            raise ValueError("factors must be non-negative")

    @property
    def d(self) -> Fraction:
        return Fraction(1, self.s + self.t)

    def phase1_threshold(self, n: int) -> int:
        """ceil(n**d), computed exactly."""
        return _int_root_ceil(n, self.s + self.t)

    def phase2_threshold(self, n: int) -> float:
        return n ** (1 - float(self.d))

    def is_light(self, degree: int, n: int) -> bool:
        """degree <= n**(1-d), decided in integers."""
        k = self.s + self.t
        return degree**k <= n ** (k - 1)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TraceStep:
    phase: str
    clique: tuple[int, ...]
    new_edges: int
    trigger: int | None = None
    trigger_degree: int | None = None
    range_index: int | None = None
    exact: bool = True

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self).items()}


@dataclass
class CoverTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def add(self, phase: str, clique, new_edges: int, **extra) -> None:
        self.steps.append(TraceStep(phase, tuple(clique), new_edges, **extra))

    def phases(self) -> list[str]:
        return [s.phase for s in self.steps]

    def to_list(self) -> list[dict]:
        return [s.to_dict() for s in self.steps]


@dataclass(frozen=True)
class CliquePartition:
    parts: tuple[Clique, ...]

    def __len__(self) -> int:
        return len(self.parts)

    def check(self, g: Graph) -> None:
        """Raise ValueError unless the parts are disjoint cliques covering V(g)."""
        seen = 0
        for part in self.parts:
            if not part.members:
                raise ValueError("empty part in clique partition")
            m = part.mask
            if m & seen:
                raise ValueError(f"part {part.members} overlaps an earlier part")
            if not is_clique(g, part.members):
                raise ValueError(f"part {part.members} is not a clique")
            seen |= m
        if seen != g.vertex_mask:
            missing = list(bits(g.vertex_mask & ~seen))
            raise ValueError(f"partition misses vertices {missing}")


class _Uncovered:
    """Per-vertex bitsets of still-uncovered incident edges."""

    def __init__(self, g: Graph):
        self.rows = list(g.adj)
        self.remaining = g.edge_count

    def cover(self, members) -> int:
        mask = to_mask(members)
        gained = 0
        for v in members:
            gained += (self.rows[v] & mask).bit_count()
            self.rows[v] &= ~mask
        gained //= 2
        self.remaining -= gained
        return gained

    def gain(self, members) -> int:
        mask = to_mask(members)
        return sum((self.rows[v] & mask).bit_count() for v in members) // 2


# --------------------------------------------------------------------------
# quadratic baseline


def quadratic_baseline_cover(g: Graph) -> CliqueCover:
    """At most floor(n^2/4) cliques: repeatedly clear everything at an edge's ends.

    For the lexicographically first remaining edge xy: one triangle per common
    neighbor, one edge per private neighbor, plus xy itself when x and y have
    no common neighbor; then delete x and y.
    """
    out = CoverBuilder(g)
    alive = g.vertex_mask
    while True:
        x = next((v for v in bits(alive) if g.adj[v] & alive), None)
        if x is None:
            break
        nx = g.adj[x] & alive
        y = (nx & -nx).bit_length() - 1
        ny = g.adj[y] & alive
        common = nx & ny
        for z in bits(common):
            out.add(Clique.of((x, y, z)), "quadratic:triangle")
        for z in bits(nx & ~ny & ~(1 << y)):
            out.add(Clique.of((x, z)), "quadratic:x-edge")
        for z in bits(ny & ~nx & ~(1 << x)):
            out.add(Clique.of((y, z)), "quadratic:y-edge")
        if not common:
            out.add(Clique((x, y)), "quadratic:xy")
        alive &= ~(1 << x) & ~(1 << y)
    return out.freeze()


# --------------------------------------------------------------------------
# heavy clique search


def _coverage_bound(h_rows, g_adj, R: int, P: int) -> int:
    """Upper bound on extra uncovered edges a clique S within P can add to R."""
    order, colors = _color_sort(P, g_adj)
    width = colors[-1] if colors else 0
    if width == 0:
        return 0
    gains = sorted(
        ((h_rows[v] & R).bit_count() + min(width - 1, (h_rows[v] & P).bit_count()) / 2 for v in order),
        reverse=True,
    )
    return int(sum(gains[:width]))


def _exact_heavy(h_rows, g_adj, U: int, goal: int | None) -> tuple[int, tuple[int, ...]]:
    """Max-coverage clique of g inside U, lexicographically first among maxima.

    With ``goal`` set, stop at the first clique (in lexicographic order) whose
    coverage reaches it.
    """
    best_cov = -1
    best: tuple[int, ...] = ()

    class _Done(Exception):
        pass

    def rec(members: list[int], R: int, cov: int, P: int) -> None:
        nonlocal best_cov, best
        if cov > best_cov:
            best_cov, best = cov, tuple(members)
            if goal is not None and cov >= goal:
                raise _Done
        if not P:
            return
        floor = best_cov if goal is None else max(best_cov, goal - 1)
        if cov + _coverage_bound(h_rows, g_adj, R, P) <= floor:
            return
        for v in bits(P):
            bit = 1 << v
            members.append(v)
            rec(members, R | bit, cov + (h_rows[v] & R).bit_count(), P & g_adj[v] & _above(v))
            members.pop()

    try:
        rec([], 0, 0, U)
    except _Done:
        pass
    return best_cov, best


def _greedy_heavy(h_rows, g_adj, U: int) -> tuple[int, tuple[int, ...]]:
    members: list[int] = []
    R = 0
    P = U
    cov = 0
    while P:
        v = max(bits(P), key=lambda u: ((h_rows[u] & R).bit_count(), (h_rows[u] & P).bit_count(), -u))
        cov += (h_rows[v] & R).bit_count()
        members.append(v)
        R |= 1 << v
        P &= g_adj[v]
    return cov, tuple(sorted(members))


def _heavy_clique(h_rows, g: Graph, threshold: int, mode: str, maximize: bool = True) -> Clique | None:
    U = to_mask(v for v, row in enumerate(h_rows) if row)
    if mode == FAITHFUL:
        cov, members = _exact_heavy(h_rows, g.adj, U, None if maximize else threshold)
    else:
        cov, members = _greedy_heavy(h_rows, g.adj, U)
    if cov >= threshold and members:
        return Clique(members)
    return None


def find_heavy_clique(h: Graph, g: Graph, threshold: int, mode: str = FAITHFUL) -> Clique | None:
    """A clique of ``g`` covering at least ``threshold`` edges of ``h``, or None.

    Faithful mode searches exactly, maximizing coverage, and None certifies that
    no such clique exists.  Practical mode grows one clique greedily and may
    miss.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    if h.n != g.n:
        raise ValueError("h and g must share a vertex set")
    return _heavy_clique(list(h.adj), g, threshold, _MODE_ALIASES[mode])


# --------------------------------------------------------------------------
# threshold cover


def greedy_threshold_cover(g: Graph, params: CoverParams | None = None) -> tuple[CliqueCover, CoverTrace]:
    """Heavy cliques first, then K2s around light vertices, looped to a fixed point.

    Phase 1 adds cliques covering >= ceil(n^d) new edges while one exists.
    Phase 2 repeatedly takes the lowest vertex with 1..n^(1-d) uncovered
    edges and covers those edges by K2s.  If both phases stall with edges
    left, the first uncovered edge is covered alone ("fallback").
    """
    params = params or CoverParams()
    n = g.n
    thr = params.phase1_threshold(n)
    exact = params.mode == FAITHFUL
    state = _Uncovered(g)
    out = CoverBuilder(g)
    trace = CoverTrace()
    while state.remaining:
        acted = False
        while True:
            clique = _heavy_clique(state.rows, g, thr, params.mode)
            if clique is None:
                break
            gained = state.cover(clique.members)
            out.add(clique, "phase1")
            trace.add("phase1", clique.members, gained, exact=exact)
            acted = True
        while True:
            v = next(
                (v for v, row in enumerate(state.rows) if row and params.is_light(row.bit_count(), n)),
                None,
            )
            if v is None:
                break
            degree = state.rows[v].bit_count()
            for u in bits(state.rows[v]):
                pair = (v, u) if v < u else (u, v)
                gained = state.cover(pair)
                out.add(Clique(pair), "phase2")
                trace.add("phase2", pair, gained, trigger=v, trigger_degree=degree, exact=exact)
            acted = True
        if state.remaining and not acted:
            u = next(v for v, row in enumerate(state.rows) if row)
            w = (state.rows[u] & -state.rows[u]).bit_length() - 1
            gained = state.cover((u, w))
            out.add(Clique((u, w)), "fallback")
            trace.add("fallback", (u, w), gained, exact=exact)
    return out.freeze(), trace


def audit_threshold_trace(g: Graph, trace: CoverTrace, params: CoverParams) -> list[str]:
    """Replay a threshold-cover trace and list every broken invariant.

    Checks that phase-1 steps cover >= ceil(n^d) new edges, phase-2 triggers
    were light, recorded gains match the replay, and (exactly) that no clique
    covering >= ceil(n^d) uncovered edges existed before any phase-2 or
    fallback step.
    """
    n = g.n
    thr = params.phase1_threshold(n)
    state = _Uncovered(g)
    problems = []
    prev = None
    for i, step in enumerate(trace.steps):
        if step.phase in ("phase2", "fallback"):
            heavy = _heavy_clique(state.rows, g, thr, FAITHFUL, maximize=False)
            if heavy is not None:
                problems.append(f"step {i}: clique {heavy.members} covering >= {thr} edges was available")
        if step.phase == "phase2":
            if step.trigger not in step.clique:
                problems.append(f"step {i}: trigger {step.trigger} not in {step.clique}")
            # a trigger's K2s are consecutive; its degree is checked when it is selected
            if prev is None or prev.phase != "phase2" or prev.trigger != step.trigger:
                degree = state.rows[step.trigger].bit_count()
                if degree != step.trigger_degree or not params.is_light(degree, n):
                    problems.append(f"step {i}: trigger {step.trigger} had {degree} uncovered edges")
            elif step.trigger_degree != prev.trigger_degree:
                problems.append(f"step {i}: trigger degree changed inside one block")
        if not is_clique(g, step.clique):
            problems.append(f"step {i}: {step.clique} is not a clique")
        gained = state.cover(step.clique)
        if gained != step.new_edges:
            problems.append(f"step {i}: recorded {step.new_edges} new edges, replay gives {gained}")
        if step.phase == "phase1" and gained < thr:
            problems.append(f"step {i}: phase-1 clique covered only {gained} < {thr}")
        prev = step
    if state.remaining:
        problems.append(f"{state.remaining} edges left uncovered after the trace")
    return problems


# --------------------------------------------------------------------------
# minimum-degree peeling


def _range_index(m: int, n: int) -> int | None:
    """i with m in [2^i sqrt(n), 2^(i+1) sqrt(n)), or None for m < 4 sqrt(n)."""
    if m * m < 16 * n:
        return None
    i = 2
    while m * m >= 4 ** (i + 1) * n:
        i += 1
    return i


def mindeg_peeling_cover(
    g: Graph, variant: str = "K22", params: CoverParams | None = None
) -> tuple[CliqueCover, CoverTrace]:
    """Peel a minimum-degree vertex, covering its edges by cliques from its neighborhood.

    The peeled vertex v has the fewest uncovered edges among the n' vertices
    that still have any (ties to the lowest index).  Maximum cliques of g
    inside its uncovered neighborhood D are extracted while more than
    remainder_factor * sqrt(n') vertices of D remain; the rest become
    singletons.  Each part C yields the clique {v} + C.
    """
    if variant not in ("K22", "K23"):
        raise ValueError(f"variant must be 'K22' or 'K23', got {variant!r}")
    params = params or CoverParams()
    faithful = params.mode == FAITHFUL
    state = _Uncovered(g)
    out = CoverBuilder(g)
    trace = CoverTrace()
    alive = to_mask(v for v, row in enumerate(state.rows) if row)
    while alive:
        n_cur = alive.bit_count()
        v = min(bits(alive), key=lambda x: (state.rows[x].bit_count(), x))
        M = state.rows[v]
        degree = M.bit_count()
        limit = params.remainder_factor * math.sqrt(n_cur)
        parts: list[tuple[tuple[int, ...], str, int | None]] = []
        while M and M.bit_count() > limit:
            members = max_clique_in(g, M)
            parts.append((members, "peel", _range_index(M.bit_count(), n_cur)))
            M &= ~to_mask(members)
        parts.extend(((u,), "peel-singleton", None) for u in bits(M))
        for members, phase, idx in parts:
            clique = Clique.of((v, *members))
            gained = state.cover(clique.members)
            if gained == 0 and not faithful:
                continue
            out.add(clique, f"{variant}:{phase}")
            trace.add(phase, clique.members, gained, trigger=v, trigger_degree=degree, range_index=idx)
        alive = to_mask(x for x in bits(alive) if state.rows[x])
    return out.freeze(), trace


# --------------------------------------------------------------------------
# clique partition and the product cover


def clique_partition(g: Graph, s: int, params: CoverParams | None = None) -> CliquePartition:
    """Partition V(g) into cliques by repeated maximum-clique extraction.

    On the current vertex set W (w = |W|), maximum cliques of size at least
    partition_factor * w^(1/(s-1)) * log2(w)^((s-2)/(s-1)) are removed until
    none is that large, then the procedure restarts on what is left.  If a
    round removes nothing, the remaining vertices become singletons.
    """
    if s < 3:
        raise ValueError(f"s must be >= 3, got {s}")
    params = params or CoverParams(s=s)
    f = params.partition_factor
    parts: list[Clique] = []
    W = g.vertex_mask
    while W:
        w = W.bit_count()
        if w == 1:
            parts.append(Clique.from_mask(W))
            break
        tau = f * w ** (1 / (s - 1)) * math.log2(w) ** ((s - 2) / (s - 1))
        removed = False
        while W:
            members = max_clique_in(g, W)
            if len(members) < tau:
                break
            parts.append(Clique(members))
            W &= ~to_mask(members)
            removed = True
        if not removed:
            parts.extend(Clique((v,)) for v in bits(W))
            break
    return CliquePartition(tuple(parts))


def partition_product_cover(g: Graph, parts: CliquePartition, dedupe: bool = True) -> CliqueCover:
    """Cliques A_v = {v} + (N(v) & A) over all vertices v and parts A.

    Cliques of size one are skipped.  With ``dedupe``, cliques already emitted
    or covering no new edge (in v-then-part order) are dropped.
    """
    parts.check(g)
    out = CoverBuilder(g)
    state = _Uncovered(g)
    seen: set[tuple[int, ...]] = set()
    for v in range(g.n):
        for k, part in enumerate(parts.parts):
            members = tuple(sorted({v} | set(bits(g.adj[v] & part.mask))))
            if len(members) < 2:
                continue
            if dedupe and (members in seen or state.gain(members) == 0):
                continue
            seen.add(members)
            state.cover(members)
            out.add(Clique(members), f"product:v{v}:part{k}")
    return out.freeze()


# --------------------------------------------------------------------------
# bounds


BOUND_KINDS = ("quadratic", "main_st", "ks1", "k22", "k23", "lower_stable")
SHAPE_ONLY = frozenset({"ks1", "k22", "k23", "lower_stable"})


def bound_value(kind: str, n: int, s: int | None = None, t: int | None = None, constant: float | None = None) -> float:
    """Closed-form cover-size bound; log is base 2.

    ``quadratic`` and ``main_st`` are explicit.  The other kinds are only
    known up to a constant, which the caller must supply.
    """
    if kind not in BOUND_KINDS:
        raise ValueError(f"unknown bound kind {kind!r}")
    if n < 0:
        raise ValueError("n must be non-negative")
    if kind in SHAPE_ONLY and constant is None:
        raise ValueError(f"bound {kind!r} is a shape only and needs an explicit constant")
    if kind in ("ks1", "k23", "lower_stable") and n < 2:
        raise ValueError(f"bound {kind!r} involves log n and needs n >= 2")
    if kind in ("main_st", "ks1", "lower_stable") and (s is None or s < 3):
        raise ValueError(f"bound {kind!r} needs s >= 3")
    if kind == "main_st" and (t is None or t < 2):
        raise ValueError("bound 'main_st' needs t >= 2")
    if kind == "quadratic":
        return float(n * n // 4)
    if kind == "main_st":
        return 1.5 * n ** (2 - 1 / (s + t))
    lg = math.log2(n) if n >= 2 else 0.0
    if kind == "ks1":
        return constant * n ** (2 - 1 / (s - 1)) / lg ** ((s - 2) / (s - 1))
    if kind == "k22":
        return constant * n**1.5
    if kind == "k23":
        return constant * n**1.5 * math.sqrt(lg)
    return constant * n ** (2 - 4 / (s + 1)) / lg**2


# --------------------------------------------------------------------------
# registry used by the CLI and the experiment harness


ALGORITHMS = ("quadratic", "threshold", "peel22", "peel23", "partition-product")

_BOUND_FOR = {
    "quadratic": "quadratic",
    "threshold": "main_st",
    "peel22": "k22",
    "peel23": "k23",
    "partition-product": "ks1",
}


def run_algorithm(name: str, g: Graph, params: CoverParams) -> tuple[CliqueCover, CoverTrace | None]:
    runners: dict[str, Callable[[], tuple[CliqueCover, CoverTrace | None]]] = {
        "quadratic": lambda: (quadratic_baseline_cover(g), None),
        "threshold": lambda: greedy_threshold_cover(g, params),
        "peel22": lambda: mindeg_peeling_cover(g, "K22", params),
        "peel23": lambda: mindeg_peeling_cover(g, "K23", params),
        "partition-product": lambda: (
            partition_product_cover(g, clique_partition(g, max(params.s, 3), params)),
            None,
        ),
    }
    if name not in runners:
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    return runners[name]()


def algorithm_bound(name: str, n: int, params: CoverParams) -> tuple[str, float | None, bool]:
    """(bound kind, value or None when undefined at this n, shape-only flag)."""
    kind = _BOUND_FOR[name]
    try:
        value = bound_value(kind, n, params.s, params.t, 1.0 if kind in SHAPE_ONLY else None)
    except ValueError:
        value = None
    return kind, value, kind in SHAPE_ONLY
