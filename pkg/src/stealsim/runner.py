"""Replicated and swept execution of scenarios.

Replication i of a scenario always runs with seed base_seed + i, so any
single run can be reproduced in isolation. Replications are independent;
with workers > 1 they are farmed out to a process pool and the results
are reassembled in replication order either way.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .config import with_cell
from .core import SimulationReport, initialize, run
from .errors import ConfigError
from .tracing import stats_row

AXIS_ORDER = ("W", "p", "lambda", "policy")
_AXIS_TO_OVERRIDE = {"W": "total_work", "p": "num_procs", "lambda": "latency"}


def simulate_once(config, seed, keep_log=False, keep_application=False):
    """Run a single replication; by default strip the heavy run objects."""
    state = initialize(config, seed)
    report = run(state)
    if not keep_log:
        report.log = None
    if not keep_application:
        report.application = None
    return report


def _replication_job(args):
    config, seed = args
    report = simulate_once(config, seed)
    return SimulationReport(seed=report.seed, stats=report.stats)


def run_scenario(config, workers=None, keep_logs=False, keep_applications=False):
    """All replications of one scenario, ordered by replication index."""
    config.validate()
    seeds = [config.base_seed + i for i in range(config.replications)]
    if workers is not None and workers > 1 and not (keep_logs or keep_applications):
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_replication_job, [(config, s) for s in seeds]))
    return [simulate_once(config, s, keep_log=keep_logs, keep_application=keep_applications) for s in seeds]


@dataclass
class SweepResult:
    """Grid axes plus the per-cell run statistics.

    ``cells`` maps a tuple of axis values (in axis order) to the list of
    RunStatistics, one per replication, ordered by replication index.
    """

    axes: list
    reps: int
    cells: dict

    def rows(self, base_config):
        """Flatten to CSV rows (cell configuration + per-run statistics)."""
        for values, stats_list in self.cells.items():
            cell_config = _cell_config(base_config, self.axes, values)
            for i, stats in enumerate(stats_list):
                yield stats_row(cell_config, i, cell_config.base_seed + i, stats)


def _cell_config(base_config, axes, values):
    overrides = {}
    for (name, _), value in zip(axes, values):
        if name == "policy":
            overrides["simultaneous"] = value == "mwt"
        else:
            overrides[_AXIS_TO_OVERRIDE[name]] = value
    return with_cell(base_config, **overrides)


def sweep(config, axes, reps=None, workers=None):
    """Run the full grid of a scenario over the given axes.

    ``axes`` is a list of (name, values) pairs; names come from
    {"W", "p", "lambda", "policy"} and policy values are "swt"/"mwt".
    Every cell runs ``reps`` replications (default: the scenario's own
    replication count) with the same derived seeds, so cells are paired
    run-for-run.
    """
    seen = set()
    for name, values in axes:
        if name not in AXIS_ORDER:
            raise ConfigError(f"unknown sweep axis: {name!r}")
        if name in seen:
            raise ConfigError(f"axis {name!r} given twice")
        if not values:
            raise ConfigError(f"axis {name!r} has no values")
        seen.add(name)
    if reps is None:
        reps = config.replications
    if reps < 1:
        raise ConfigError(f"reps must be >= 1, got {reps}")
    cells = {}
    for values in itertools.product(*(list(v) for _, v in axes)):
        cell_config = _cell_config(config, axes, values)
        cell_config.replications = reps
        reports = run_scenario(cell_config, workers=workers)
        cells[values] = [r.stats for r in reports]
    return SweepResult(axes=[(n, list(v)) for n, v in axes], reps=reps, cells=cells)
