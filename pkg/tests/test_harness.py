import json
from itertools import combinations, permutations

import pytest

from ecclab.generators import complete_graph, cycle_graph, petersen_graph, random_gnp
from ecclab.graph import build_graph
from ecclab.harness import (
    CSV_COLUMNS,
    ExperimentSpec,
    canonical_form,
    check_alpha2_graph,
    conjecture_sweep,
    expand_family,
    lowerbound_experiment,
    rows_to_csv,
    rows_to_json,
    run_experiment,
    triangle_free_graphs,
)
from ecclab.oracles import independence_number


def spec(**kw):
    return ExperimentSpec.from_dict(kw)


# -- experiments --------------------------------------------------------------


def test_kab_quadratic_rows():
    rows = run_experiment(spec(instances=[{"family": "kab", "a": [2, 3]}], algorithms=["quadratic"]))
    assert [(r.instance_id, r.cover_size, r.oracle_min) for r in rows] == [
        ("kab(a=2,b=2)", 4, 4),
        ("kab(a=3,b=3)", 9, 9),
    ]
    assert all(r.cover_size <= r.n * r.n // 4 and r.valid for r in rows)


def test_incidence_peel_ratio_trend():
    rows = run_experiment(
        spec(instances=[{"family": "incidence", "q": [2, 3, 5]}], algorithms=["peel22"], params={"mode": "practical"})
    )
    ratios = [r.bound_ratio for r in rows]
    assert [r.n for r in rows] == [14, 26, 62]
    assert all(r.bound_kind == "k22" for r in rows)
    assert ratios == sorted(ratios, reverse=True)


def test_empty_spec_gives_empty_table():
    rows = run_experiment(spec())
    assert rows == []
    assert rows_to_csv(rows) == ",".join(CSV_COLUMNS) + "\n"
    assert rows_to_json(rows) == "[]\n"


def test_spec_rejects_unknown_names():
    with pytest.raises(ValueError, match="unknown spec keys"):
        spec(instance=[])
    with pytest.raises(ValueError, match="family"):
        spec(instances=[{"family": "hypercube"}])
    with pytest.raises(ValueError, match="algorithm"):
        spec(algorithms=["magic"])
    with pytest.raises(ValueError):
        spec(params={"mode": "fast"})


def test_expand_family_shapes():
    ids = [i.instance_id for i in expand_family({"family": "kab", "a": [1, 2], "b": 3})]
    assert ids == ["kab(a=1,b=3)", "kab(a=2,b=3)"]
    gnp = list(expand_family({"family": "gnp", "n": 8, "p": [0.3, 0.6], "seeds": [0, 1]}))
    assert len(gnp) == 4 and gnp[0].graph == random_gnp(8, 0.3, 0)
    joined = list(expand_family({"family": "join", "m": [5], "s": 3}))
    assert joined[0].graph.n == 10
    assert [i.graph for i in expand_family({"family": "petersen"})] == [petersen_graph()]


MIXED = {
    "instances": [
        {"family": "gnp", "n": [9, 14], "p": [0.3, 0.7], "seeds": [4, 5]},
        {"family": "cycle", "n": [5, 6]},
        {"family": "incidence", "q": 2},
        {"family": "kab", "a": 3},
    ],
    "algorithms": ["quadratic", "threshold", "peel22", "peel23", "partition-product"],
    "params": {"s": 3, "t": 2, "mode": "practical"},
}


def test_rows_are_sorted_and_oracle_dominated():
    rows = run_experiment(spec(**MIXED))
    keys = [(r.family, r.instance_id, r.algorithm) for r in rows]
    assert len(rows) == (8 + 2 + 1 + 1) * 5
    assert [k[0] for k in keys] == sorted(k[0] for k in keys)
    for r in rows:
        assert r.valid
        if r.oracle_min is not None:
            assert r.oracle_min <= r.cover_size


def test_outputs_are_byte_identical_across_runs():
    first = run_experiment(spec(**MIXED))
    second = run_experiment(spec(**MIXED))
    assert rows_to_csv(first) == rows_to_csv(second)
    assert rows_to_json(first, emit_covers=True) == rows_to_json(second, emit_covers=True)


def test_parallel_run_matches_serial():
    serial = rows_to_csv(run_experiment(spec(**MIXED)))
    assert rows_to_csv(run_experiment(spec(**MIXED), jobs=2)) == serial


def test_runtime_only_on_request():
    rows = run_experiment(spec(instances=[{"family": "cycle", "n": 5}], algorithms=["quadratic"]))
    assert "runtime" not in rows_to_csv(rows)
    assert rows_to_csv(rows, include_runtime=True).splitlines()[0].endswith(",runtime")
    data = json.loads(rows_to_json(rows, emit_covers=True))
    assert sorted(data[0]["cliques"]) == [[0, 1], [0, 4], [1, 2], [2, 3], [3, 4]]


# -- enumeration --------------------------------------------------------------


def _brute_classes(n):
    """Triangle-free classes by minimizing the edge bitmask over all n! relabelings."""
    pairs = list(combinations(range(n), 2))
    triples = list(combinations(range(n), 3))
    perms = list(permutations(range(n)))
    classes = set()
    for code in range(1 << len(pairs)):
        es = {pairs[i] for i in range(len(pairs)) if code >> i & 1}
        if any({(a, b), (a, c), (b, c)} <= es for a, b, c in triples):
            continue
        classes.add(min(sum(1 << pairs.index(tuple(sorted((p[u], p[v])))) for u, v in es) for p in perms))
    return len(classes)


@pytest.mark.parametrize("n", range(0, 6))
def test_triangle_free_enumeration_matches_brute_force(n):
    assert len(triangle_free_graphs(n)) == _brute_classes(n)


def test_triangle_free_class_counts():
    # 38 and 107 are the classical counts of triangle-free graphs on 6 and 7 vertices
    assert [len(triangle_free_graphs(n)) for n in range(8)] == [1, 1, 2, 3, 7, 14, 38, 107]


def test_canonical_form_is_label_invariant():
    g = random_gnp(8, 0.4, 9)
    relabel = [3, 7, 0, 5, 1, 6, 2, 4]
    h = build_graph(8, [(relabel[u], relabel[v]) for u, v in g.edges()])
    assert canonical_form(g) == canonical_form(h)
    assert canonical_form(cycle_graph(6)) != canonical_form(
        build_graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    )


# -- conjecture sweep ----------------------------------------------------------


def test_conjecture_examples():
    c5 = cycle_graph(5)
    assert independence_number(c5) == 2 and check_alpha2_graph(c5) == 5
    for n in range(1, 8):
        assert check_alpha2_graph(complete_graph(n)) <= 1
    cp = petersen_graph().complement()
    assert independence_number(cp) == 2
    size = check_alpha2_graph(cp)
    assert size is None or size <= 10


def test_conjecture_sweep_small():
    report = conjecture_sweep(5)
    assert report.ok and report.skipped == 0
    assert report.checked == 1 + 2 + 3 + 7 + 14
    assert report.by_n[5]["tight"] >= 1


def test_conjecture_sweep_marks_budget_failures_as_skipped():
    report = conjecture_sweep(7, budget=1)
    assert report.skipped > 0
    assert report.checked + report.skipped == 172
    assert report.to_dict()["ok"]


# -- lower-bound table -------------------------------------------------------------


def test_lowerbound_examples():
    rows = lowerbound_experiment(3, [5])
    assert (rows[0].n, rows[0].cover_lower_bound, rows[0].alpha, rows[0].omega) == (10, 7, 2, 4)
    assert rows[0].oracle_min >= 7
    rows = lowerbound_experiment(4, [1, 8])
    assert rows[0].cover_lower_bound == 1
    assert rows[1].status == "ok" and rows[1].omega == 6 and rows[1].cover_lower_bound == 8
    assert rows[1].alpha <= 3


def test_lowerbound_records_search_failure():
    rows = lowerbound_experiment(3, [6], max_iters=200)
    assert rows[0].status == "search-failed" and rows[0].cover_lower_bound is None


def test_lowerbound_requires_s_at_least_three():
    with pytest.raises(ValueError):
        lowerbound_experiment(2, [3])
