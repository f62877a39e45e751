"""Shared fixtures and checkers for the simulator test suite."""
from __future__ import annotations

import math

import pytest

from stealsim import (
    DagSpec,
    MergeCostConfig,
    PolicyConfig,
    ProcState,
    ScenarioConfig,
    StrategyConfig,
    ThresholdConfig,
    TopologyConfig,
    simulate_once,
)


def make_config(
    model="divisible",
    total_work=1000,
    p=4,
    latency=10,
    layout="single",
    clusters=None,
    interconnect="complete",
    strategy="uniform",
    q=None,
    simultaneous=False,
    threshold_mode="static",
    threshold_value=0,
    replications=1,
    base_seed=0,
    dag=None,
    merge_cost=None,
):
    """Build a validated ScenarioConfig without going through JSON."""
    config = ScenarioConfig(
        model=model,
        total_work=total_work if model != "dag" else None,
        dag=DagSpec(**dag) if isinstance(dag, dict) else dag,
        merge_cost=MergeCostConfig(**merge_cost) if isinstance(merge_cost, dict) else merge_cost,
        topology=TopologyConfig(
            num_procs=p, latency=latency, layout=layout, clusters=clusters, interconnect=interconnect
        ),
        strategy=StrategyConfig(kind=strategy, q=q),
        policy=PolicyConfig(
            simultaneous=simultaneous,
            threshold=ThresholdConfig(mode=threshold_mode, value=threshold_value),
        ),
        replications=replications,
        base_seed=base_seed,
    )
    return config.validate()


# state cycle: a processor starts ACTIVE (P0) or STEALING, alternates
# STEALING -> ACTIVE -> STEALING, and can only end a run via ACTIVE -> IDLE
_ALLOWED = {
    ProcState.ACTIVE: {ProcState.STEALING, ProcState.IDLE},
    ProcState.STEALING: {ProcState.ACTIVE},
    ProcState.IDLE: set(),
}


def check_state_cycle(log):
    """Assert every processor's trace walks the legal state cycle."""
    for pid, recs in enumerate(log.records):
        assert recs, f"P{pid} has no trace records"
        times = [t for t, _ in recs]
        assert times == sorted(times), f"P{pid} trace times not monotone: {times}"
        states = [s for _, s in recs]
        assert states[0] in (ProcState.ACTIVE, ProcState.STEALING), f"P{pid} starts in {states[0]}"
        for a, b in zip(states, states[1:]):
            assert b in _ALLOWED[a], f"P{pid} illegal transition {a.name} -> {b.name}"
        assert recs[0][0] == 0, f"P{pid} first record not at time 0"


def check_report(config, report):
    """Invariants every finished run must satisfy, whatever the model."""
    stats = report.stats
    app = report.application
    log = report.log
    assert app is not None and log is not None, "run with keep_log/keep_application expected"

    assert app.created_count == app.completed_count
    regular, merge = app.executed_work()
    assert stats.total_work_executed == regular
    assert stats.merge_work_executed == merge
    if config.model in ("divisible", "adaptive"):
        assert regular == config.total_work, "work leaked or duplicated by splits"

    # every executed task ran for exactly its work
    per_proc = [0] * config.topology.num_procs
    for task in app.tasks.values():
        assert task.end_time - task.start_time == task.work
        per_proc[task.executed_by] += task.work
    assert per_proc == stats.busy_time, "trace ACTIVE intervals disagree with task durations"

    assert stats.steal_pending >= 0
    assert stats.steal_requests_total == stats.steal_success + stats.steal_fail + stats.steal_pending
    assert 0 <= stats.t_startup_end <= stats.t_plateau_end <= stats.makespan
    assert stats.makespan >= math.ceil(regular / config.topology.num_procs)

    check_state_cycle(log)

    if config.model == "dag":
        for task in app.tasks.values():
            for cid in task.children:
                child = app.tasks[cid]
                assert task.end_time <= child.start_time, f"edge {task.tid}->{cid} violated"


def run_checked(config, seed=0):
    report = simulate_once(config, seed, keep_log=True, keep_application=True)
    check_report(config, report)
    return report


@pytest.fixture
def two_proc_config():
    """The hand-verified 2-processor scenario."""
    return make_config(total_work=100, p=2, latency=10)
