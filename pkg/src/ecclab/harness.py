"""Experiment orchestration: instance x algorithm sweeps, the alpha <= 2
conjecture sweep and the doubled-witness lower-bound table.

Outputs are byte-reproducible: rows are sorted canonically and wall-clock
runtimes are left out unless explicitly requested.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import permutations, product
from typing import Any, Iterable, Iterator

from . import generators as gen
from .covers import ALGORITHMS, CoverParams, algorithm_bound, bound_value, run_algorithm
from .graph import Graph, bits, build_graph, validate_cover
from .oracles import (
    DEFAULT_ECC_BUDGET,
    BudgetExceeded,
    clique_number,
    independence_number,
    min_ecc_exact,
    ramsey_search,
)

log = logging.getLogger(__name__)


class InvalidCoverError(RuntimeError):
    """An algorithm produced an invalid cover; ``payload`` holds the evidence."""

    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


# --------------------------------------------------------------------------
# experiment specs


FAMILIES = ("kab", "gnp", "incidence", "join", "cycle", "complete", "petersen", "triangle_free")


@dataclass(frozen=True)
class Instance:
    family: str
    params: tuple[tuple[str, Any], ...]
    graph: Graph

    @property
    def instance_id(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.family}({inner})"


@dataclass
class ExperimentSpec:
    instances: list[dict] = field(default_factory=list)
    algorithms: list[str] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    oracle_cutoff: int = 10
    oracle_budget: int = DEFAULT_ECC_BUDGET
    output: str | None = None

    def __post_init__(self) -> None:
        for fam in self.instances:
            if fam.get("family") not in FAMILIES:
                raise ValueError(f"unknown family {fam.get('family')!r}; choose from {FAMILIES}")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {name!r}")
        CoverParams(**self.params)

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentSpec:
        known = {"instances", "algorithms", "params", "oracle_cutoff", "oracle_budget", "output"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown spec keys: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> ExperimentSpec:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def cover_params(self) -> CoverParams:
        return CoverParams(**self.params)


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def expand_family(fam: dict) -> Iterator[Instance]:
    kind = fam["family"]
    if kind == "kab":
        a_vals = _as_list(fam["a"])
        pairs = product(a_vals, _as_list(fam["b"])) if "b" in fam else ((a, a) for a in a_vals)
        for a, b in pairs:
            yield Instance(kind, (("a", a), ("b", b)), gen.complete_bipartite(a, b))
    elif kind == "gnp":
        for n, p, seed in product(_as_list(fam["n"]), _as_list(fam["p"]), _as_list(fam.get("seeds", [0]))):
            yield Instance(kind, (("n", n), ("p", p), ("seed", seed)), gen.random_gnp(n, p, seed))
    elif kind == "incidence":
        for q in _as_list(fam["q"]):
            yield Instance(kind, (("q", q),), gen.incidence_c4free(q))
    elif kind == "join":
        s = fam.get("s", 3)
        max_omega = fam.get("max_omega", s - 1)
        for m in _as_list(fam["m"]):
            for seed in _as_list(fam.get("seeds", [0])):
                w = ramsey_search(m, s, max_omega, seed, fam.get("max_iters", 20_000))
                if w is None:
                    log.warning("no witness for m=%d s=%d seed=%d; instance skipped", m, s, seed)
                    continue
                inst = gen.join_lowerbound(w)
                yield Instance(kind, (("m", m), ("s", s), ("seed", seed)), inst.joined)
                break
    elif kind == "cycle":
        for n in _as_list(fam["n"]):
            yield Instance(kind, (("n", n),), gen.cycle_graph(n))
    elif kind == "complete":
        for n in _as_list(fam["n"]):
            yield Instance(kind, (("n", n),), gen.complete_graph(n))
    elif kind == "petersen":
        yield Instance(kind, (), gen.petersen_graph())
    elif kind == "triangle_free":
        for n, seed in product(_as_list(fam["n"]), _as_list(fam.get("seeds", [0]))):
            yield Instance(kind, (("n", n), ("seed", seed)), gen.random_triangle_free(n, seed))


# --------------------------------------------------------------------------
# result rows


CSV_COLUMNS = (
    "instance_id",
    "family",
    "n",
    "edge_count",
    "algorithm",
    "cover_size",
    "bound_kind",
    "bound_value",
    "bound_ratio",
    "oracle_min",
    "valid",
)


@dataclass
class ResultRow:
    instance_id: str
    family: str
    n: int
    edge_count: int
    algorithm: str
    cover_size: int
    bound_kind: str
    bound_value: float | None
    bound_ratio: float | None
    oracle_min: int | None
    valid: bool
    runtime: float = 0.0
    cliques: list[list[int]] | None = None
    sort_key: tuple = field(default=(), repr=False, compare=False)

    def to_dict(self, include_runtime: bool = False, emit_covers: bool = False) -> dict:
        d = {c: getattr(self, c) for c in CSV_COLUMNS}
        if include_runtime:
            d["runtime"] = self.runtime
        if emit_covers:
            d["cliques"] = self.cliques
        return d


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def rows_to_csv(rows: Iterable[ResultRow], include_runtime: bool = False) -> str:
    cols = list(CSV_COLUMNS) + (["runtime"] if include_runtime else [])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt(getattr(row, c)) for c in cols])
    return buf.getvalue()


def rows_to_json(rows: Iterable[ResultRow], include_runtime: bool = False, emit_covers: bool = False) -> str:
    payload = [r.to_dict(include_runtime, emit_covers) for r in rows]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _sort_key(inst: Instance, algorithm: str) -> tuple:
    return (inst.family, tuple((k, float(v) if isinstance(v, (int, float)) else 0.0) for k, v in inst.params), algorithm)


def _run_cell(inst: Instance, algorithm: str, params: CoverParams, oracle_min: int | None) -> ResultRow:
    g = inst.graph
    start = time.perf_counter()
    cover, trace = run_algorithm(algorithm, g, params)
    runtime = time.perf_counter() - start
    report = validate_cover(g, cover)
    if not report.valid:
        payload = {
            "instance_id": inst.instance_id,
            "algorithm": algorithm,
            "params": params.to_dict(),
            "graph_edges": g.edges(),
            "cliques": cover.to_lists(),
            "non_clique_indices": list(report.non_clique_indices),
            "uncovered_edges": [list(e) for e in report.uncovered_edges],
            "trace": trace.to_list() if trace else None,
        }
        raise InvalidCoverError(f"{algorithm} produced an invalid cover on {inst.instance_id}", payload)
    if oracle_min is not None and oracle_min > cover.size:
        raise AssertionError(f"oracle minimum {oracle_min} exceeds {algorithm} cover size {cover.size}")
    kind, bound, _ = algorithm_bound(algorithm, g.n, params)
    ratio = cover.size / bound if bound else None
    return ResultRow(
        instance_id=inst.instance_id,
        family=inst.family,
        n=g.n,
        edge_count=g.edge_count,
        algorithm=algorithm,
        cover_size=cover.size,
        bound_kind=kind,
        bound_value=bound,
        bound_ratio=ratio,
        oracle_min=oracle_min,
        valid=True,
        runtime=runtime,
        cliques=cover.to_lists(),
        sort_key=_sort_key(inst, algorithm),
    )


def _oracle(g: Graph, cutoff: int, budget: int) -> int | None:
    if g.n > cutoff:
        return None
    try:
        return min_ecc_exact(g, budget).size
    except BudgetExceeded:
        log.info("oracle budget exceeded on n=%d graph; oracle_min left empty", g.n)
        return None


def _run_cell_args(args) -> ResultRow:
    return _run_cell(*args)


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> list[ResultRow]:
    """Run every (instance, algorithm) cell, validate it, bound it and, for
    n <= oracle_cutoff, compare against the exact minimum."""
    params = spec.cover_params()
    cells = []
    for fam in spec.instances:
        for inst in expand_family(fam):
            oracle = _oracle(inst.graph, spec.oracle_cutoff, spec.oracle_budget) if spec.algorithms else None
            cells.extend((inst, algo, params, oracle) for algo in spec.algorithms)
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_cell_args, cells))
    else:
        rows = [_run_cell(*cell) for cell in cells]
    rows.sort(key=lambda r: r.sort_key)
    return rows


# --------------------------------------------------------------------------
# graph enumeration up to isomorphism


def _refine(g: Graph) -> list[int]:
    """Stable color refinement with isomorphism-invariant color names."""
    colors = g.degrees()
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in bits(g.adj[v])))) for v in range(g.n)]
        names = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        new = [names[sig] for sig in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_form(g: Graph) -> tuple:
    """Isomorphism-complete certificate: the smallest relabeled adjacency over
    all orderings that respect the refined color classes."""
    colors = _refine(g)
    cells = [[v for v in range(g.n) if colors[v] == c] for c in sorted(set(colors))]
    best = None
    for choice in product(*(permutations(cell) for cell in cells)):
        order = [v for cell in choice for v in cell]
        pos = {v: i for i, v in enumerate(order)}
        code = tuple(sum(1 << pos[u] for u in bits(g.adj[v])) for v in order)
        if best is None or code < best:
            best = code
    return (g.n, tuple(len(c) for c in cells), best or ())


def triangle_free_graphs(n: int) -> list[Graph]:
    """One representative per isomorphism class of triangle-free graphs on n vertices.

    Built by adding a vertex whose neighborhood is a stable set of a smaller
    representative, deduplicated by ``canonical_form``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    level = [build_graph(0, [])]
    for k in range(n):
        seen: dict[tuple, Graph] = {}
        for g in level:
            for nbrs in _stable_subsets(g):
                edges = g.edges() + [(u, k) for u in bits(nbrs)]
                h = build_graph(k + 1, edges)
                seen.setdefault(canonical_form(h), h)
        level = [seen[key] for key in sorted(seen)]
    return level


def _stable_subsets(g: Graph) -> Iterator[int]:
    def rec(candidates: int, chosen: int) -> Iterator[int]:
        yield chosen
        for v in bits(candidates):
            higher = candidates & ~((1 << (v + 1)) - 1)
            yield from rec(higher & ~g.adj[v], chosen | (1 << v))

    yield from rec(g.vertex_mask, 0)


# --------------------------------------------------------------------------
# alpha <= 2 conjecture sweep


@dataclass
class ConjectureReport:
    checked: int = 0
    skipped: int = 0
    tight: int = 0
    violations: list[dict] = field(default_factory=list)
    by_n: dict[int, dict] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        d = asdict(self)
        d["by_n"] = {str(k): v for k, v in sorted(self.by_n.items())}
        d["ok"] = self.ok
        return d


EXHAUSTIVE_MAX_N = 7


def check_alpha2_graph(g: Graph, budget: int = DEFAULT_ECC_BUDGET) -> int | None:
    """Minimum cover size of an alpha <= 2 graph, or None if the oracle gave up."""
    try:
        return min_ecc_exact(g, budget).size
    except BudgetExceeded:
        return None


def conjecture_sweep(max_n: int, samples: int = 0, seed: int = 0, budget: int = DEFAULT_ECC_BUDGET) -> ConjectureReport:
    """Check min cover <= n over graphs with alpha <= 2.

    These are exactly the complements of triangle-free graphs: every class
    for n <= 7, and ``samples`` random ones per n above that.
    """
    report = ConjectureReport()
    for n in range(1, max_n + 1):
        if n <= EXHAUSTIVE_MAX_N:
            bases = triangle_free_graphs(n)
            mode = "exhaustive"
        else:
            bases = [gen.random_triangle_free(n, seed * 1_000_003 + n * 1009 + i) for i in range(samples)]
            mode = "sampled"
        stats = {"mode": mode, "graphs": len(bases), "checked": 0, "skipped": 0, "tight": 0, "max_min_cover": 0}
        for base in bases:
            g = base.complement()
            size = check_alpha2_graph(g, budget)
            if size is None:
                stats["skipped"] += 1
                report.skipped += 1
                continue
            stats["checked"] += 1
            report.checked += 1
            stats["max_min_cover"] = max(stats["max_min_cover"], size)
            if size == n:
                stats["tight"] += 1
                report.tight += 1
            if size > n:
                violation = {"n": n, "min_cover": size, "edges": g.edges()}
                report.violations.append(violation)
                log.error("COUNTEREXAMPLE: alpha <= 2 graph on %d vertices needs %d cliques: %s", n, size, g.edges())
        report.by_n[n] = stats
    return report


# --------------------------------------------------------------------------
# lower-bound table


@dataclass
class LowerBoundRow:
    m: int
    n: int
    s: int
    seed: int | None
    status: str
    alpha: int | None = None
    omega: int | None = None
    cover_lower_bound: int | None = None
    shape_value: float | None = None
    oracle_min: int | None = None


def lowerbound_experiment(
    s: int,
    sizes: Iterable[int],
    seeds: Iterable[int] = (0,),
    max_omega: int | None = None,
    max_iters: int = 20_000,
    oracle_cutoff: int = 10,
    oracle_budget: int = DEFAULT_ECC_BUDGET,
) -> list[LowerBoundRow]:
    """For each witness size m: find a certified witness, double it, and
    record the certified bound next to n^(2-4/(s+1)) / (log n)^2."""
    if s < 3:
        raise ValueError("s must be >= 3")
    max_omega = s - 1 if max_omega is None else max_omega
    seeds = list(seeds)
    rows = []
    for m in sizes:
        witness = None
        for seed in seeds:
            witness = ramsey_search(m, s, max_omega, seed, max_iters)
            if witness is not None:
                break
        if witness is None:
            rows.append(LowerBoundRow(m, 2 * m, s, None, "search-failed"))
            continue
        inst = gen.join_lowerbound(witness)
        n = 2 * m
        row = LowerBoundRow(
            m=m,
            n=n,
            s=s,
            seed=witness.seed,
            status="ok",
            alpha=independence_number(inst.joined),
            omega=clique_number(inst.joined),
            cover_lower_bound=inst.cover_lower_bound,
            shape_value=bound_value("lower_stable", n, s, constant=1.0),
        )
        row.oracle_min = _oracle(inst.joined, oracle_cutoff, oracle_budget)
        if row.oracle_min is not None and row.oracle_min < row.cover_lower_bound:
            raise AssertionError(f"oracle {row.oracle_min} below certified bound {row.cover_lower_bound} at m={m}")
        rows.append(row)
    return rows
