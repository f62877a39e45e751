"""Discrete-event simulator for work stealing with explicit steal latencies.

Idle processors (thieves) send steal requests across the platform; busy
victims answer with half of their remaining work or a refusal, and every
request/answer pays the topology's latency. The package simulates this
protocol exactly (integer time, three event kinds), supports divisible
loads, task DAGs, and adaptive tasks with merges, and ships the analysis
used to validate makespan bounds and latency limits.
"""
from __future__ import annotations

from .analysis import (
    acceptable,
    compare_mwt_swt,
    fit_constant,
    limit_latency_experimental,
    limit_latency_theoretical,
    overhead_ratio,
    quartiles,
    theoretical_bound,
)
from .config import (
    DagSpec,
    MergeCostConfig,
    PolicyConfig,
    ScenarioConfig,
    StrategyConfig,
    ThresholdConfig,
    TopologyConfig,
    load_scenario,
    parse_scenario,
    scenario_to_dict,
    with_cell,
)
from .core import SimulationReport, SimulationState, initialize, run
from .errors import ConfigError, DeadlockError, SimulationError
from .events import Event, EventKind, EventQueue, StealPayload
from .processors import Processor
from .runner import SweepResult, run_scenario, simulate_once, sweep
from .tasks import (
    Application,
    MergeCost,
    Task,
    TaskModel,
    dump_application,
    generate_dag,
    load_application,
    new_adaptive,
    new_divisible,
    steal_from_deque,
)
from .topology import PlatformTopology, StealPolicy, VictimStrategy
from .tracing import (
    ProcState,
    RunStatistics,
    TraceLog,
    detect_phases,
    export_json_dag,
    export_paje,
    read_stats_csv,
    stats_row,
    write_stats_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Application",
    "ConfigError",
    "DagSpec",
    "DeadlockError",
    "Event",
    "EventKind",
    "EventQueue",
    "MergeCost",
    "MergeCostConfig",
    "PlatformTopology",
    "PolicyConfig",
    "ProcState",
    "Processor",
    "RunStatistics",
    "ScenarioConfig",
    "SimulationError",
    "SimulationReport",
    "SimulationState",
    "StealPayload",
    "StealPolicy",
    "StrategyConfig",
    "SweepResult",
    "Task",
    "TaskModel",
    "ThresholdConfig",
    "TopologyConfig",
    "TraceLog",
    "VictimStrategy",
    "acceptable",
    "compare_mwt_swt",
    "detect_phases",
    "dump_application",
    "export_json_dag",
    "export_paje",
    "fit_constant",
    "generate_dag",
    "initialize",
    "limit_latency_experimental",
    "limit_latency_theoretical",
    "load_application",
    "load_scenario",
    "new_adaptive",
    "new_divisible",
    "overhead_ratio",
    "parse_scenario",
    "quartiles",
    "read_stats_csv",
    "run",
    "run_scenario",
    "scenario_to_dict",
    "simulate_once",
    "stats_row",
    "steal_from_deque",
    "sweep",
    "theoretical_bound",
    "with_cell",
    "write_stats_csv",
]
