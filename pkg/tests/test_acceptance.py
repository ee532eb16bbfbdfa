"""Exit criteria, one test each.  Every test records a PASS/FAIL line that is
repeated in the terminal summary."""

import json
import time

import pytest

from ecclab import CoverParams, audit_threshold_trace, contains_induced_kst, min_ecc_exact, validate_cover
from ecclab.cli import main
from ecclab.covers import greedy_threshold_cover, mindeg_peeling_cover, quadratic_baseline_cover
from ecclab.generators import complete_bipartite, cycle_graph, incidence_c4free, join_lowerbound, random_gnp
from ecclab.harness import conjecture_sweep
from ecclab.oracles import RamseyWitness, clique_number, independence_number, ramsey_search
from helpers import VARIANTS, corpus, run_variant

pytestmark = pytest.mark.acceptance


def test_criterion_1_quadratic_extremal_value(acceptance_log):
    details, ok = [], True
    for a in (2, 3):
        start = time.perf_counter()
        size = min_ecc_exact(complete_bipartite(a, a)).size
        elapsed = time.perf_counter() - start
        ok &= size == a * a and elapsed < 1.0
        details.append(f"K{a},{a} -> {size} in {elapsed:.3f}s")
    acceptance_log(1, ok, "; ".join(details))
    assert ok


def test_criterion_2_baseline_bound(acceptance_log):
    start = time.perf_counter()
    violations = 0
    for i in range(1000):
        n = 1 + i % 60
        p = (0.2, 0.5, 0.8)[i % 3]
        g = random_gnp(n, p, i)
        cover = quadratic_baseline_cover(g)
        if cover.size > n * n // 4 or not validate_cover(g, cover).valid:
            violations += 1
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 30
    acceptance_log(2, ok, f"1000 graphs, {violations} violations, {elapsed:.1f}s")
    assert ok


def test_criterion_3_validity_suite(acceptance_log):
    runs = invalid = errors = 0
    for label, g in corpus():
        for name in VARIANTS:
            runs += 1
            try:
                cover, _ = run_variant(name, g)
            except Exception:  # noqa: BLE001 - any exception counts against the criterion
                errors += 1
                continue
            if not validate_cover(g, cover).valid:
                invalid += 1
    ok = runs >= 5000 and invalid == 0 and errors == 0
    acceptance_log(3, ok, f"{runs} runs, {invalid} invalid, {errors} exceptions")
    assert ok


def test_criterion_4_oracle_dominance(acceptance_log):
    start = time.perf_counter()
    graphs = checked = violations = 0
    for label, g in corpus():
        if g.n > 10:
            continue
        graphs += 1
        best = min_ecc_exact(g).size
        for name in VARIANTS:
            checked += 1
            if run_variant(name, g)[0].size < best:
                violations += 1
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 300
    acceptance_log(4, ok, f"{graphs} graphs x {len(VARIANTS)} variants = {checked} checks, {violations} violations, {elapsed:.1f}s")
    assert ok


def test_criterion_5_alpha2_sweep(acceptance_log):
    start = time.perf_counter()
    report = conjecture_sweep(7)
    elapsed = time.perf_counter() - start
    ok = report.ok and report.skipped == 0 and elapsed < 600
    acceptance_log(
        5,
        ok,
        f"{report.checked} graphs checked, {report.skipped} skipped, {len(report.violations)} violations, "
        f"{report.tight} tight, {elapsed:.1f}s",
    )
    assert ok


def test_criterion_6_k22_sharpness_shape(acceptance_log):
    start = time.perf_counter()
    ratios, free = {}, True
    for q in (2, 3, 5, 7):
        g = incidence_c4free(q)
        free &= not contains_induced_kst(g, 2, 2)
        cover, _ = mindeg_peeling_cover(g, "K22", CoverParams(mode="practical"))
        assert validate_cover(g, cover).valid
        ratios[q] = cover.size / g.n**1.5
    elapsed = time.perf_counter() - start
    growth = ratios[7] / ratios[3]
    ok = free and growth <= 1.25 and elapsed < 120
    shown = ", ".join(f"q={q}: {r:.4f}" for q, r in ratios.items())
    acceptance_log(6, ok, f"K22-free={free}; size/n^1.5 {shown}; max {max(ratios.values()):.4f}; q7/q3 {growth:.3f}; {elapsed:.1f}s")
    assert ok


def test_criterion_7_threshold_trace(acceptance_log):
    params = CoverParams(3, 2, "faithful")
    start = time.perf_counter()
    problems = []
    phase2_steps = 0
    for i in range(200):
        n = 2 + i % 39
        g = random_gnp(n, (0.15, 0.35, 0.6, 0.85)[i % 4], 7000 + i)
        cover, trace = greedy_threshold_cover(g, params)
        phase2_steps += trace.phases().count("phase2")
        problems += [f"graph {i}: {p}" for p in audit_threshold_trace(g, trace, params)]
        if not validate_cover(g, cover).valid:
            problems.append(f"graph {i}: invalid cover")
    elapsed = time.perf_counter() - start
    ok = not problems
    acceptance_log(7, ok, f"200 graphs, {phase2_steps} phase-2 steps audited, {len(problems)} violations, {elapsed:.1f}s")
    assert ok, problems[:5]


def test_criterion_8_lower_bound_instance(acceptance_log):
    c5 = join_lowerbound(RamseyWitness(cycle_graph(5), s=3, omega=2))
    alpha, omega = independence_number(c5.joined), clique_number(c5.joined)
    best = min_ecc_exact(c5.joined).size
    ok_c5 = (alpha, omega, c5.cover_lower_bound) == (2, 4, 7) and best >= 7
    witness = ramsey_search(8, 4, 3, seed=0)
    ok_w = witness is not None and witness.certify() and witness.omega <= 3
    if ok_w:
        inst = join_lowerbound(witness)
        big_alpha = independence_number(inst.joined)
        ok_w = big_alpha <= 3 and inst.cover_lower_bound == 8
        second = f"m=8 witness omega={witness.omega}: alpha(join)={big_alpha}, bound {inst.cover_lower_bound}"
    else:
        second = "no certified m=8 witness"
    ok = ok_c5 and ok_w
    acceptance_log(8, ok, f"C5 join alpha={alpha} omega={omega} bound {c5.cover_lower_bound} min_ecc {best}; {second}")
    assert ok


def test_criterion_9_determinism(tmp_path, acceptance_log, capsys):
    spec = {
        "instances": [
            {"family": "gnp", "n": [10, 20, 30], "p": [0.3, 0.7], "seeds": [1, 2]},
            {"family": "incidence", "q": [2, 3]},
            {"family": "join", "m": [5, 8], "s": 4, "seeds": [0, 1]},
            {"family": "triangle_free", "n": 12, "seeds": [3]},
        ],
        "algorithms": ["quadratic", "threshold", "peel22", "peel23", "partition-product"],
        "params": {"s": 3, "t": 2, "mode": "faithful"},
    }
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    outputs = {}
    for fmt in ("csv", "json"):
        for run in (1, 2):
            path = tmp_path / f"run{run}.{fmt}"
            extra = ["--emit-covers"] if fmt == "json" else []
            assert main(["experiment", "--spec", str(spec_path), "--format", fmt, "-o", str(path), *extra]) == 0
            outputs[fmt, run] = path.read_bytes()
    capsys.readouterr()
    same = all(outputs[fmt, 1] == outputs[fmt, 2] for fmt in ("csv", "json"))
    rows = len(outputs["csv", 1].splitlines()) - 1
    ok = same and rows > 0
    acceptance_log(9, ok, f"{rows} rows; csv and json byte-identical across runs: {same}")
    assert ok
