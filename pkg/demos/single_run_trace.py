"""
A single simulated execution, step by step
==========================================

Runs one work stealing execution on a small platform, prints the run
report, and writes a Paje trace next to this script so the schedule can
be opened in a Gantt viewer (ViTE reads it directly).
"""
from pathlib import Path

from stealsim import ScenarioConfig, TopologyConfig, export_paje, simulate_once

# 10^4 units of divisible work, 8 processors, a latency of 25 time units
# per message, single work transfer and uniform victim selection.
config = ScenarioConfig(
    model="divisible",
    total_work=10**4,
    topology=TopologyConfig(num_procs=8, latency=25),
).validate()

report = simulate_once(config, seed=3, keep_log=True, keep_application=True)
stats = report.stats

print(f"makespan              {stats.makespan}")
print(f"ideal makespan (W/p)  {config.total_work // config.topology.num_procs}")
print(f"steal requests        {stats.steal_requests_total} "
      f"({stats.steal_success} granted, {stats.steal_fail} failed, "
      f"{stats.steal_pending} unanswered at the end)")
print(f"startup phase ends    {stats.t_startup_end}")
print(f"plateau phase ends    {stats.t_plateau_end}")

# per-processor time budget: busy running tasks, waiting idle, or stealing
print("\n      busy   idle  stealing")
for pid in range(config.topology.num_procs):
    print(f"P{pid}  {stats.busy_time[pid]:6d} {stats.idle_time[pid]:6d} "
          f"{stats.stealing_time[pid]:8d}")

# the trace shows who executed what and when each steal round happened
trace = Path(__file__).with_name("single_run.paje")
trace.write_text(export_paje(report.log))
print(f"\nPaje trace written to {trace.name}")
