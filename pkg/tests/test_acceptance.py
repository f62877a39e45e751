"""Acceptance gate: one test per release criterion.

Every criterion the simulator has to meet before we trust its numbers is
encoded here as exactly one test, so a verbose pytest run reads as the
acceptance report. The statistical criteria use fixed seeds; the seeds were
chosen up front and the tolerances were not tuned to them.
"""
from __future__ import annotations

import math
import random
import statistics
import time
from pathlib import Path

import pytest

from stealsim import (
    compare_mwt_swt,
    export_json_dag,
    export_paje,
    fit_constant,
    generate_dag,
    initialize,
    limit_latency_experimental,
    limit_latency_theoretical,
    load_application,
    overhead_ratio,
    run_scenario,
    simulate_once,
)
from stealsim.processors import answer_steal_request

from conftest import make_config, run_checked

GOLDEN = Path(__file__).parent / "data" / "two_proc_hand_trace.paje"

BOUND_W = 10**6
BOUND_PROCS = (32, 64)
BOUND_LATENCIES = (2, 62, 262)
BOUND_REPS = 100


@pytest.fixture(scope="session")
def bound_grid():
    """Makespans for the bound-validation grid, shared by criteria 1 and 2."""
    cells = {}
    started = time.monotonic()
    for p in BOUND_PROCS:
        for latency in BOUND_LATENCIES:
            config = make_config(
                total_work=BOUND_W, p=p, latency=latency, replications=BOUND_REPS, base_seed=42
            )
            cells[(p, latency)] = [r.stats.makespan for r in run_scenario(config)]
    return cells, time.monotonic() - started


def test_criterion_1_bound_holds_on_every_run(bound_grid):
    cells, elapsed = bound_grid
    violations = 0
    for (p, latency), makespans in cells.items():
        lower = math.ceil(BOUND_W / p)
        upper = BOUND_W / p + 16 * latency * math.log2(BOUND_W / latency)
        for makespan in makespans:
            if not lower <= makespan <= upper:
                violations += 1
    assert violations == 0, f"{violations} runs escaped the makespan bound"
    print(
        f"criterion 1 PASS: {sum(len(v) for v in cells.values())} runs, "
        f"0 bound violations ({elapsed:.1f}s)"
    )


def test_criterion_2_overhead_ratio_median_per_cell(bound_grid):
    cells, _ = bound_grid
    medians = {}
    for (p, latency), makespans in cells.items():
        ratios = [overhead_ratio(m, BOUND_W, p, latency) for m in makespans]
        assert all(r is not None for r in ratios), f"ideal makespan reached at p={p}, lambda={latency}"
        medians[(p, latency)] = statistics.median(ratios)
    for cell, med in medians.items():
        assert 3.0 <= med <= 6.5, f"median overhead ratio {med:.2f} out of band at {cell}"
    spread = f"{min(medians.values()):.2f}..{max(medians.values()):.2f}"
    print(f"criterion 2 PASS: per-cell median overhead ratio in [{spread}]")


def test_criterion_3_fitted_constant():
    samples = []
    for total_work in (10**5, 10**6):
        for p in (32, 64, 128):
            for latency in (2, 62, 262, 482):
                config = make_config(
                    total_work=total_work, p=p, latency=latency, replications=50, base_seed=42
                )
                samples.extend(
                    (total_work, p, latency, r.stats.makespan) for r in run_scenario(config)
                )
    c = fit_constant(samples)
    assert 3.0 <= c <= 4.6, f"fitted overhead constant {c:.3f} out of band"
    print(f"criterion 3 PASS: fitted constant c = {c:.3f} over {len(samples)} runs")


def test_criterion_4_limit_latency_matches_theory():
    total_work = 10**6
    lines = []
    for p in (64, 128):
        config = make_config(
            total_work=total_work, p=p, latency=1, replications=31, base_seed=42
        )
        experimental = limit_latency_experimental(total_work, p, config)
        theoretical = limit_latency_theoretical(total_work, p)
        ratio = experimental / theoretical
        assert 0.7 <= ratio <= 1.3, f"p={p}: experimental {experimental} vs theoretical {theoretical:.2f}"
        linear_rule = (total_work / p) / experimental
        assert 330 <= linear_rule <= 610, f"p={p}: W/p divided by limit latency = {linear_rule:.0f}"
        lines.append(f"p={p}: lambda={experimental} (theory {theoretical:.1f}, W/p/lambda {linear_rule:.0f})")
    print(f"criterion 4 PASS: {'; '.join(lines)}")


def test_criterion_5_mwt_speeds_startup_not_makespan():
    lines = []
    for p in (32, 64):
        config = make_config(
            total_work=10**7, p=p, latency=262, replications=100, base_seed=42
        )
        rows = compare_mwt_swt(config)
        valid = [r for r in rows if r["valid"]]
        assert valid, "no valid startup pairs"
        gains = sum(1 for r in valid if r["startup_ratio"] > 1)
        assert gains >= 0.70 * len(valid), f"p={p}: startup gain in only {gains}/{len(valid)} pairs"
        med_diff = statistics.median(abs(r["rel_makespan_diff"]) for r in rows)
        assert med_diff < 0.02, f"p={p}: median makespan difference {med_diff:.3%}"
        lines.append(f"p={p}: gain in {gains}/{len(valid)}, median diff {med_diff:.2%}")
    print(f"criterion 5 PASS: {'; '.join(lines)}")


def test_criterion_6_two_processor_hand_trace():
    config = make_config(total_work=100, p=2, latency=10)
    report = simulate_once(config, 0, keep_log=True, keep_application=True)
    app, log, stats = report.application, report.log, report.stats

    # P1 steals at 0, the request lands at 10, P0 splits its remaining 90
    # into 45/45, the answer lands at 20, both drain and P0 goes idle at 55.
    assert stats.makespan == 65
    assert app.tasks[0].work == 55 and (app.tasks[0].start_time, app.tasks[0].end_time) == (0, 55)
    assert app.tasks[1].work == 45 and (app.tasks[1].start_time, app.tasks[1].end_time) == (20, 65)
    assert (stats.steal_requests_total, stats.steal_success, stats.steal_fail, stats.steal_pending) == (2, 1, 0, 1)
    assert log.records[0] == [(0, 0), (55, 2)]  # ACTIVE then STEALING
    assert log.records[1] == [(0, 2), (20, 0), (65, 1)]  # STEALING, ACTIVE, IDLE
    assert export_paje(log) == GOLDEN.read_text()
    print("criterion 6 PASS: hand-derived trace and Paje golden file reproduced")


def test_criterion_7_property_suites():
    # determinism: identical seed, identical run, twice
    config = make_config(total_work=5000, p=8, latency=7, simultaneous=True)
    first = simulate_once(config, 123, keep_log=True)
    second = simulate_once(config, 123, keep_log=True)
    assert first.stats == second.stats
    assert first.log.records == second.log.records

    # conservation and the state cycle on 1000 randomized small scenarios
    rng = random.Random(987654321)
    checked = 0
    for _ in range(1000):
        model = rng.choice(["divisible", "adaptive", "dag"])
        kwargs = dict(
            model=model,
            p=rng.randint(1, 8),
            latency=rng.randint(1, 20),
            simultaneous=rng.random() < 0.5,
            threshold_value=rng.choice([0, 0, 5]),
        )
        if model == "dag":
            kwargs["total_work"] = None
            kwargs["dag"] = {"kind": "binary-tree", "depth": rng.randint(1, 4)}
        else:
            kwargs["total_work"] = rng.randint(1, 1000)
        run_checked(make_config(**kwargs), seed=rng.randint(0, 2**31))
        checked += 1

    # precedence and the critical-path floor on every generator
    for kind, shape in (("binary-tree", {"depth": 4}), ("fork-join", {"width": 6}), ("merge-sort", {"leaves": 8})):
        for p in (2, 5):
            for seed in (0, 1):
                config = make_config(model="dag", total_work=None, p=p, latency=3, dag={"kind": kind, **shape})
                report = run_checked(config, seed=seed)
                app = report.application
                floor = max(app.critical_path, math.ceil(len(app.tasks) / p))
                assert report.stats.makespan >= floor

    # sequential halving conserves work for every batch size up to 5
    for batch in range(1, 6):
        config = make_config(total_work=100, p=8, latency=1, simultaneous=True)
        state = initialize(config, seed=0)
        victim = state.processors[0]
        remaining, expected = 100, []
        for _ in range(batch):
            stolen = remaining // 2
            expected.append(stolen)
            remaining -= stolen
        for thief in range(1, batch + 1):
            answer_steal_request(victim, thief, state, 0)
        granted = [state.application.tasks[tid].work for tid in range(1, state.application.created_count)]
        assert granted == expected
        assert victim.running_task.work == remaining
        assert victim.running_task.work + sum(granted) == 100

    print(f"criterion 7 PASS: determinism, {checked} conservation runs, DAG floors, halving batches")


def test_criterion_8_round_trips(tmp_path):
    app = generate_dag("merge-sort", leaves=8)
    path = tmp_path / "dag.json"
    path.write_text(export_json_dag(app))
    loaded = load_application(path.read_text())
    assert set(loaded.tasks) == set(app.tasks)
    for tid, task in app.tasks.items():
        twin = loaded.tasks[tid]
        assert twin.work == task.work
        assert sorted(twin.children) == sorted(task.children)

    config = make_config(total_work=3000, p=5, latency=9)
    a = simulate_once(config, 7, keep_log=True)
    b = simulate_once(config, 7, keep_log=True)
    assert export_paje(a.log) == export_paje(b.log)
    print("criterion 8 PASS: JSON DAG round trip and byte-stable Paje export")
