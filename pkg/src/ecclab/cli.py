"""``lab`` command line: gen, cover, exact, verify, experiment, conjecture, lowerbound.

Exit status is 1 when any validity check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import generators as gen
from .covers import ALGORITHMS, CoverParams, algorithm_bound, run_algorithm
from .graph import Graph, validate_cover
from .harness import (
    ExperimentSpec,
    InvalidCoverError,
    conjecture_sweep,
    lowerbound_experiment,
    rows_to_csv,
    rows_to_json,
    run_experiment,
)
from .io import format_edge_list, read_edge_list
from .oracles import (
    DEFAULT_ECC_BUDGET,
    BudgetExceeded,
    contains_induced_kst,
    max_clique_exact,
    max_stable_exact,
    min_ecc_exact,
    ramsey_search,
)

# certified properties in the gen sidecar are computed only up to this size
SIDECAR_ORACLE_MAX_N = 128


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    return int(os.environ.get("LAB_SEED", "0"))


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- gen --------------------------------------------------------------------


def _cmd_gen(args) -> int:
    seed = _seed(args.seed)
    props: dict = {"family": args.family}
    if args.family == "kab":
        g = gen.complete_bipartite(args.a, args.b)
        props["params"] = {"a": args.a, "b": args.b}
    elif args.family == "gnp":
        g = gen.random_gnp(args.n, args.p, seed)
        props["params"] = {"n": args.n, "p": args.p, "seed": seed}
    elif args.family == "incidence":
        g = gen.incidence_c4free(args.q)
        props["params"] = {"q": args.q}
        props["k22_free"] = not contains_induced_kst(g, 2, 2)
    else:
        max_omega = args.s - 1 if args.max_omega is None else args.max_omega
        witness = ramsey_search(args.m, args.s, max_omega, seed, args.max_iters)
        props["params"] = {"m": args.m, "s": args.s, "max_omega": max_omega, "seed": seed}
        if witness is None:
            print(f"no witness found for m={args.m} s={args.s} max_omega={max_omega}", file=sys.stderr)
            return 1
        props["witness"] = {
            "alpha_below": args.s,
            "omega": witness.omega,
            "iterations_used": witness.iterations_used,
            "edges": witness.graph.edges(),
        }
        if args.family == "ramsey":
            g = witness.graph
        else:
            inst = gen.join_lowerbound(witness)
            g = inst.joined
            props["cross_edges"] = inst.cross_edges
            props["clique_cross_cap"] = inst.clique_cross_cap
            props["cover_lower_bound"] = inst.cover_lower_bound
    props["n"] = g.n
    props["edge_count"] = g.edge_count
    props["content_hash"] = g.content_hash()
    if g.n <= SIDECAR_ORACLE_MAX_N:
        props["alpha"] = len(max_stable_exact(g))
        props["omega"] = len(max_clique_exact(g))
    _emit(format_edge_list(g), args.output)
    if args.output:
        sidecar = Path(args.output)
        sidecar.with_name(sidecar.name + ".json").write_text(_dump(props))
    return 0


# -- cover / verify / exact --------------------------------------------------


def _params(args) -> CoverParams:
    return CoverParams(
        s=args.s,
        t=args.t,
        mode=args.mode,
        remainder_factor=args.remainder_factor,
        partition_factor=args.partition_factor,
    )


def cover_payload(algorithm: str, g: Graph, params: CoverParams, seed: int) -> dict:
    cover, trace = run_algorithm(algorithm, g, params)
    report = validate_cover(g, cover)
    kind, bound, shape_only = algorithm_bound(algorithm, g.n, params)
    return {
        "algorithm": algorithm,
        "params": {**params.to_dict(), "seed": seed},
        "graph_hash": cover.graph_hash,
        "size": cover.size,
        "cliques": cover.to_lists(),
        "provenance": list(cover.provenance),
        "trace": trace.to_list() if trace else [],
        "bound": bound,
        "bound_kind": kind,
        "bound_shape_only": shape_only,
        "bound_ratio": cover.size / bound if bound else None,
        "valid": report.valid,
    }


def _cmd_cover(args) -> int:
    g = read_edge_list(args.graph)
    payload = cover_payload(args.algo, g, _params(args), _seed(args.seed))
    _emit(_dump(payload), args.output)
    return 0 if payload["valid"] else 1


def _cmd_verify(args) -> int:
    g = read_edge_list(args.graph)
    data = json.loads(Path(args.cover).read_text())
    cliques = data["cliques"] if isinstance(data, dict) else data
    report = validate_cover(g, cliques)
    out = asdict(report)
    out["uncovered_edges"] = [list(e) for e in report.uncovered_edges]
    out["non_clique_indices"] = list(report.non_clique_indices)
    if isinstance(data, dict) and data.get("graph_hash") not in (None, g.content_hash()):
        out["graph_hash_mismatch"] = True
    _emit(_dump(out), args.output)
    return 0 if report.valid else 1


def _cmd_exact(args) -> int:
    g = read_edge_list(args.graph)
    clique = max_clique_exact(g)
    stable = max_stable_exact(g)
    out = {
        "n": g.n,
        "edge_count": g.edge_count,
        "alpha": len(stable),
        "omega": len(clique),
        "min_ecc": None,
        "witness_sets": {"max_clique": list(clique), "max_stable": list(stable), "min_cover": None},
    }
    try:
        cover = min_ecc_exact(g, args.budget)
        out["min_ecc"] = cover.size
        out["witness_sets"]["min_cover"] = cover.to_lists()
    except BudgetExceeded as exc:
        out["min_ecc_status"] = f"budget exceeded after {exc.nodes} nodes"
    _emit(_dump(out), args.output)
    return 0


# -- experiments --------------------------------------------------------------


def _cmd_experiment(args) -> int:
    spec = ExperimentSpec.load(args.spec)
    output = args.output or spec.output
    fmt = args.format or ("json" if output and output.endswith(".json") else "csv")
    try:
        rows = run_experiment(spec, jobs=args.jobs)
    except InvalidCoverError as exc:
        print(str(exc), file=sys.stderr)
        sys.stderr.write(_dump(exc.payload))
        return 1
    if fmt == "json":
        text = rows_to_json(rows, include_runtime=args.timings, emit_covers=args.emit_covers)
    else:
        text = rows_to_csv(rows, include_runtime=args.timings)
    _emit(text, output)
    return 0


def _cmd_conjecture(args) -> int:
    report = conjecture_sweep(args.max_n, args.samples, _seed(args.seed), args.budget)
    _emit(_dump(report.to_dict()), args.output)
    if not report.ok:
        print(f"COUNTEREXAMPLES FOUND: {len(report.violations)}", file=sys.stderr)
        return 1
    return 0


def _cmd_lowerbound(args) -> int:
    seeds = args.seeds or [_seed(None)]
    rows = lowerbound_experiment(
        args.s, args.sizes, seeds, args.max_omega, args.max_iters, args.oracle_cutoff, args.budget
    )
    _emit(_dump([asdict(r) for r in rows]), args.output)
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance as an edge list plus a JSON sidecar")
    p.add_argument("--family", required=True, choices=("kab", "gnp", "incidence", "join", "ramsey"))
    p.add_argument("--a", type=int, default=3)
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--s", type=int, default=3)
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--max-omega", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("cover", help="run one cover algorithm on an edge-list file")
    p.add_argument("graph")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--s", type=int, default=3)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--mode", choices=("faithful", "practical"), default="faithful")
    p.add_argument("--remainder-factor", type=float, default=None)
    p.add_argument("--partition-factor", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_cover)

    p = sub.add_parser("exact", help="alpha, omega and minimum clique cover by exact search")
    p.add_argument("graph")
    p.add_argument("--budget", type=int, default=DEFAULT_ECC_BUDGET)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("verify", help="validate a cover JSON against a graph")
    p.add_argument("graph")
    p.add_argument("cover")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("experiment", help="run an experiment spec")
    p.add_argument("--spec", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--emit-covers", action="store_true")
    p.add_argument("--timings", action="store_true", help="add runtimes (breaks byte reproducibility)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("conjecture", help="check min cover <= n on graphs with alpha <= 2")
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_ECC_BUDGET)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_conjecture)

    p = sub.add_parser("lowerbound", help="certified lower bounds from doubled Ramsey witnesses")
    p.add_argument("--s", type=int, default=4)
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--seeds", type=int, nargs="*")
    p.add_argument("--max-omega", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=20_000)
    p.add_argument("--oracle-cutoff", type=int, default=10)
    p.add_argument("--budget", type=int, default=DEFAULT_ECC_BUDGET)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_lowerbound)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
