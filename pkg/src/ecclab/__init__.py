"""Edge clique covers of K_{s,t}-free graphs: constructive covers, exact oracles
and lower-bound constructions on bitset graphs."""

from .covers import (
    ALGORITHMS,
    CliquePartition,
    CoverParams,
    CoverTrace,
    TraceStep,
    audit_threshold_trace,
    bound_value,
    clique_partition,
    find_heavy_clique,
    greedy_threshold_cover,
    mindeg_peeling_cover,
    partition_product_cover,
    quadratic_baseline_cover,
    run_algorithm,
)
from .generators import LowerBoundInstance, complete_bipartite, incidence_c4free, join_lowerbound, random_gnp
from .graph import Clique, CliqueCover, CoverReport, Graph, build_graph, is_clique, uncovered_subgraph, validate_cover
from .io import format_edge_list, parse_edge_list
from .oracles import (
    BudgetExceeded,
    RamseyWitness,
    contains_induced_kst,
    find_induced_kst,
    max_clique_exact,
    max_stable_exact,
    min_ecc_exact,
    ramsey_search,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BudgetExceeded",
    "Clique",
    "CliqueCover",
    "CliquePartition",
    "CoverParams",
    "CoverReport",
    "CoverTrace",
    "Graph",
    "LowerBoundInstance",
    "RamseyWitness",
    "TraceStep",
    "audit_threshold_trace",
    "bound_value",
    "build_graph",
    "clique_partition",
    "complete_bipartite",
    "contains_induced_kst",
    "find_heavy_clique",
    "find_induced_kst",
    "format_edge_list",
    "greedy_threshold_cover",
    "incidence_c4free",
    "is_clique",
    "join_lowerbound",
    "max_clique_exact",
    "max_stable_exact",
    "min_ecc_exact",
    "mindeg_peeling_cover",
    "parse_edge_list",
    "partition_product_cover",
    "quadratic_baseline_cover",
    "ramsey_search",
    "random_gnp",
    "run_algorithm",
    "uncovered_subgraph",
    "validate_cover",
]
