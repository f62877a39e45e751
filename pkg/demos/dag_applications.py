"""
Task graphs on a clustered platform
===================================

Work stealing also schedules applications given as a DAG of unit tasks:
the owner pops from the back of its queue, thieves steal the task with
the largest height, and no task starts before its parents finish. Here
the three built-in generators run on a two-cluster platform where a steal
across clusters costs the full latency and a local one costs a single
time unit.
"""
import math
from pathlib import Path

from stealsim import (
    DagSpec,
    ScenarioConfig,
    TopologyConfig,
    export_json_dag,
    generate_dag,
    simulate_once,
)

SHAPES = (
    DagSpec(kind="binary-tree", depth=7),
    DagSpec(kind="fork-join", width=24),
    DagSpec(kind="merge-sort", leaves=32),
)

print("two clusters of 4 processors, inter-cluster latency 40")
print("\nshape                 tasks  depth  floor  makespan")
for spec in SHAPES:
    config = ScenarioConfig(
        model="dag",
        dag=spec,
        topology=TopologyConfig(num_procs=8, latency=40, layout="two"),
    ).validate()
    report = simulate_once(config, seed=1, keep_application=True)
    app = report.application
    # the makespan can never beat the critical path or the work spread over p
    floor = max(app.critical_path, math.ceil(len(app.tasks) / 8))
    label = f"{spec.kind}({spec.depth or spec.width or spec.leaves})"
    print(f"{label:20s} {len(app.tasks):6d} {app.critical_path:6d} "
          f"{floor:6d} {report.stats.makespan:9d}")

# applications can also be described in JSON and loaded back with
# load_application; the merge-sort graph serves as a template
out = Path(__file__).with_name("merge_sort_dag.json")
out.write_text(export_json_dag(generate_dag("merge-sort", leaves=8)))
print(f"\nsample application written to {out.name}")
