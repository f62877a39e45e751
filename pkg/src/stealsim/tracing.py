"""Run traces, aggregate statistics, and export formats.

Every processor walks the cycle ACTIVE -> (IDLE-transient) -> STEALING ->
ACTIVE; the trace records each transition once (repeats coalesce) and the
statistics integrate the time spent in each state. Exports: Paje trace
files for Gantt viewers, the task-graph JSON, and flat CSV rows for the
sweep/analysis pipeline.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import IntEnum

from .errors import SimulationError
from .tasks import dump_application


class ProcState(IntEnum):
    ACTIVE = 0
    IDLE = 1
    STEALING = 2


class TraceLog:
    """Per-processor state records plus steal/work counters for one run."""

    __slots__ = (
        "num_procs",
        "records",
        "_last_state",
        "steal_requests_total",
        "steal_success",
        "steal_fail",
        "work_executed",
        "merge_work_executed",
        "makespan",
    )

    def __init__(self, num_procs):
        self.num_procs = num_procs
        self.records = [[] for _ in range(num_procs)]
        self._last_state = [None] * num_procs
        self.steal_requests_total = 0
        self.steal_success = 0
        self.steal_fail = 0
        self.work_executed = 0
        self.merge_work_executed = 0
        self.makespan = None

    def record_state(self, time, pid, state):
        """Append a state transition; same-state repeats are dropped."""
        if self._last_state[pid] == state:
            return
        recs = self.records[pid]
        if recs and recs[-1][0] > time:
            raise SimulationError(f"P{pid} trace out of order: {recs[-1][0]} then {time}")
        recs.append((time, state))
        self._last_state[pid] = state

    def note_steal_request(self):
        self.steal_requests_total += 1

    def note_steal_answer(self, granted):
        if granted:
            self.steal_success += 1
        else:
            self.steal_fail += 1

    def note_completion(self, duration, is_merge):
        if is_merge:
            self.merge_work_executed += duration
        else:
            self.work_executed += duration

    def state_durations(self):
        """Per-processor (active, idle, stealing) totals up to the makespan."""
        if self.makespan is None:
            raise SimulationError("run not finalized")
        totals = [[0, 0, 0] for _ in range(self.num_procs)]
        for pid, recs in enumerate(self.records):
            for i, (start, state) in enumerate(recs):
                end = recs[i + 1][0] if i + 1 < len(recs) else self.makespan
                totals[pid][state] += end - start
        return totals

    def finalize(self, makespan):
        self.makespan = makespan
        totals = self.state_durations()
        t_startup_end, t_plateau_end = detect_phases(self)
        return RunStatistics(
            makespan=makespan,
            steal_requests_total=self.steal_requests_total,
            steal_success=self.steal_success,
            steal_fail=self.steal_fail,
            steal_pending=self.steal_requests_total - self.steal_success - self.steal_fail,
            total_work_executed=self.work_executed,
            merge_work_executed=self.merge_work_executed,
            busy_time=[t[ProcState.ACTIVE] for t in totals],
            idle_time=[t[ProcState.IDLE] for t in totals],
            stealing_time=[t[ProcState.STEALING] for t in totals],
            t_startup_end=t_startup_end,
            t_plateau_end=t_plateau_end,
            all_active_reached=t_startup_end < makespan or self.num_procs == 1,
        )


@dataclass
class RunStatistics:
    """Flat per-run summary, cheap to store for thousands of replications."""

    makespan: int
    steal_requests_total: int
    steal_success: int
    steal_fail: int
    steal_pending: int
    total_work_executed: int
    merge_work_executed: int
    busy_time: list = field(default_factory=list)
    idle_time: list = field(default_factory=list)
    stealing_time: list = field(default_factory=list)
    t_startup_end: int = 0
    t_plateau_end: int = 0
    all_active_reached: bool = True


def detect_phases(log):
    """Boundaries of the startup / plateau / shutdown decomposition.

    Returns (t_startup_end, t_plateau_end): the first instant all
    processors are simultaneously ACTIVE, and the end of the last interval
    of full activity. If full activity is never reached both values equal
    the makespan. ACTIVE intervals are half-open, and at equal times ends
    are processed before starts so touching intervals do not fake overlap.
    """
    p = log.num_procs
    makespan = log.makespan
    if makespan is None:
        raise SimulationError("run not finalized")
    deltas = []
    for recs in log.records:
        for i, (start, state) in enumerate(recs):
            if state is not ProcState.ACTIVE:
                continue
            end = recs[i + 1][0] if i + 1 < len(recs) else makespan
            if end > start:
                deltas.append((start, 1))
                deltas.append((end, -1))
    deltas.sort(key=lambda d: (d[0], d[1]))
    count = 0
    t_startup_end = None
    t_plateau_end = None
    for time, delta in deltas:
        before = count
        count += delta
        if count == p and t_startup_end is None:
            t_startup_end = time
        if before == p and count < p:
            t_plateau_end = time
    if t_startup_end is None:
        return makespan, makespan
    if t_plateau_end is None:
        t_plateau_end = makespan
    return t_startup_end, t_plateau_end


_PAJE_HEADER = """\
%EventDef PajeDefineContainerType 0
%  Alias string
%  Type string
%  Name string
%EndEventDef
%EventDef PajeDefineStateType 1
%  Alias string
%  Type string
%  Name string
%EndEventDef
%EventDef PajeDefineEntityValue 2
%  Alias string
%  Type string
%  Name string
%EndEventDef
%EventDef PajeCreateContainer 3
%  Time date
%  Alias string
%  Type string
%  Container string
%  Name string
%EndEventDef
%EventDef PajeSetState 4
%  Time date
%  Type string
%  Container string
%  Value string
%EndEventDef
"""


def export_paje(log):
    """Render a finalized trace in the Paje format Gantt viewers read.

    One container per processor (P0, P1, ...) under a root container, one
    state type, and a PajeSetState line per transition. Times are plain
    decimal integers. Output is byte-deterministic for a given trace.
    """
    if log.makespan is None:
        raise SimulationError("run not finalized")
    out = [_PAJE_HEADER]
    out.append("0 CT_Platform 0 Platform\n")
    out.append("0 CT_Proc CT_Platform Processor\n")
    out.append("1 ST_ProcState CT_Proc State\n")
    for state in ProcState:
        out.append(f"2 {state.name} ST_ProcState {state.name}\n")
    out.append("3 0 platform CT_Platform 0 platform\n")
    for pid in range(log.num_procs):
        out.append(f"3 0 P{pid} CT_Proc platform P{pid}\n")
    transitions = []
    for pid, recs in enumerate(log.records):
        for time, state in recs:
            transitions.append((time, pid, state))
    transitions.sort(key=lambda t: (t[0], t[1]))
    for time, pid, state in transitions:
        out.append(f"4 {time} ST_ProcState P{pid} {state.name}\n")
    return "".join(out)


def export_json_dag(app):
    """Task-graph JSON for an application, including edges created by splits."""
    return dump_application(app)


STATS_CSV_COLUMNS = [
    "model",
    "W",
    "p",
    "lambda",
    "layout",
    "clusters",
    "interconnect",
    "strategy",
    "q",
    "simultaneous",
    "threshold_mode",
    "threshold_value",
    "replication",
    "seed",
    "makespan",
    "steal_requests_total",
    "steal_success",
    "steal_fail",
    "steal_pending",
    "total_work_executed",
    "merge_work_executed",
    "busy_total",
    "idle_total",
    "stealing_total",
    "t_startup_end",
    "t_plateau_end",
    "all_active_reached",
]


def stats_row(config, replication, seed, stats):
    """One CSV row: the scenario cell plus the run's statistics."""
    return {
        "model": config.model,
        "W": config.total_work if config.total_work is not None else "",
        "p": config.topology.num_procs,
        "lambda": config.topology.latency,
        "layout": config.topology.layout,
        "clusters": config.topology.clusters if config.topology.clusters is not None else "",
        "interconnect": config.topology.interconnect,
        "strategy": config.strategy.kind,
        "q": config.strategy.q if config.strategy.q is not None else "",
        "simultaneous": int(config.policy.simultaneous),
        "threshold_mode": config.policy.threshold.mode,
        "threshold_value": config.policy.threshold.value,
        "replication": replication,
        "seed": seed,
        "makespan": stats.makespan,
        "steal_requests_total": stats.steal_requests_total,
        "steal_success": stats.steal_success,
        "steal_fail": stats.steal_fail,
        "steal_pending": stats.steal_pending,
        "total_work_executed": stats.total_work_executed,
        "merge_work_executed": stats.merge_work_executed,
        "busy_total": sum(stats.busy_time),
        "idle_total": sum(stats.idle_time),
        "stealing_total": sum(stats.stealing_time),
        "t_startup_end": stats.t_startup_end,
        "t_plateau_end": stats.t_plateau_end,
        "all_active_reached": int(stats.all_active_reached),
    }


def write_stats_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=STATS_CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


_INT_COLUMNS = {
    "W",
    "p",
    "lambda",
    "simultaneous",
    "threshold_value",
    "replication",
    "seed",
    "makespan",
    "steal_requests_total",
    "steal_success",
    "steal_fail",
    "steal_pending",
    "total_work_executed",
    "merge_work_executed",
    "busy_total",
    "idle_total",
    "stealing_total",
    "t_startup_end",
    "t_plateau_end",
    "all_active_reached",
}


def read_stats_csv(path):
    """Read rows written by write_stats_csv, restoring numeric columns."""
    rows = []
    with open(path, newline="") as fh:
        for raw in csv.DictReader(fh):
            row = dict(raw)
            for key in _INT_COLUMNS:
                if key in row and row[key] != "":
                    row[key] = int(row[key])
            if row.get("clusters"):
                row["clusters"] = int(row["clusters"])
            if row.get("q"):
                row["q"] = float(row["q"])
            rows.append(row)
    return rows


def format_quartile_csv(header, rows):
    """Small helper for analysis outputs: CSV text from a header and rows."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()
