"""Analysis of simulated makespans against the theoretical model.

The makespan of a work-stealing execution decomposes as W/p plus an
overhead term bounded by 4*gamma*latency*log2(W/latency) with gamma = 4.
The helpers here measure how far real runs sit below that bound, fit the
actual overhead constant, and search for the largest latency a platform
tolerates before losing more than 10% over the ideal time W/p.
"""
from __future__ import annotations

import logging
import math
import statistics

import numpy as np
from scipy.optimize import bisect

from .config import with_cell
from .errors import ConfigError
from .runner import run_scenario

logger = logging.getLogger(__name__)


def theoretical_bound(total_work, num_procs, latency, gamma=4.0):
    """Upper bound on the expected makespan: W/p + 4*gamma*latency*log2(W/latency)."""
    if latency < 1 or total_work < latency:
        raise ConfigError("bound needs 1 <= latency <= W")
    return total_work / num_procs + 4.0 * gamma * latency * math.log2(total_work / latency)


def overhead_ratio(makespan, total_work, num_procs, latency, gamma=4.0):
    """How many times the theoretical overhead exceeds the measured one.

    ratio = 4*gamma*latency*log2(W/latency) / (makespan - W/p). Large
    values mean the bound is loose. Returns None when the measured
    overhead is zero or negative (makespan at or below the ideal W/p).
    """
    ideal = total_work / num_procs
    measured = makespan - ideal
    if measured <= 0:
        return None
    return 4.0 * gamma * latency * math.log2(total_work / latency) / measured


def fit_constant(samples):
    """Least-squares constant c for overhead = c * latency * log2(W/latency).

    ``samples`` holds (total_work, num_procs, latency, makespan) tuples.
    The fit minimizes sum((makespan - W/p - c*x)^2) with
    x = latency*log2(W/latency), i.e. c = sum(x*y)/sum(x*x). Runs whose
    makespan does not exceed W/p contribute y = 0 rather than being
    dropped.
    """
    xs = []
    ys = []
    for total_work, num_procs, latency, makespan in samples:
        xs.append(latency * math.log2(total_work / latency))
        ys.append(max(0.0, makespan - total_work / num_procs))
    if not xs:
        raise ConfigError("fit_constant needs at least one sample")
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    denom = float(np.dot(xs, xs))
    if denom == 0.0:
        raise ConfigError("fit_constant needs a non-degenerate latency grid")
    return float(np.dot(xs, ys) / denom)


def acceptable(makespan, total_work, num_procs):
    """True when the makespan is within 10% of the ideal time W/p.

    Integer inputs are compared exactly (10*p*makespan <= 11*W) so
    boundary cells cannot flip on float rounding.
    """
    if isinstance(makespan, int) and isinstance(total_work, int) and isinstance(num_procs, int):
        return 10 * num_procs * makespan <= 11 * total_work
    return makespan <= 1.1 * total_work / num_procs


def limit_latency_theoretical(total_work, num_procs, fit_c=3.8, xtol=1e-3):
    """Latency at which the modelled overhead eats exactly 10% of W/p.

    Solves fit_c * latency * log2(W/(2*latency)) = 0.1 * W/p for latency
    by bisection. The left side grows from 0 and peaks at latency =
    W/(2e); platforms whose ratio W/p is so large that even the peak
    overhead stays under 10% get the peak position returned (with a
    warning) since no crossing exists.
    """
    if total_work < 1 or num_procs < 1:
        raise ConfigError("need total_work >= 1 and num_procs >= 1")
    target = 0.1 * total_work / num_procs

    def gap(latency):
        return fit_c * latency * math.log2(total_work / (2.0 * latency)) - target

    peak = total_work / (2.0 * math.e)
    if gap(peak) < 0:
        logger.warning(
            "overhead never reaches 10%% of W/p (W=%d, p=%d); returning the peak position", total_work, num_procs
        )
        return peak
    left = xtol / 2.0
    if gap(left) >= 0:
        return left  # overhead already above 10% at (near) zero latency
    return float(bisect(gap, left, peak, xtol=xtol))


def limit_latency_experimental(total_work, num_procs, config, max_latency=None):
    """Largest integer latency whose median makespan is still acceptable.

    Runs the scenario's replication count per probed latency, takes the
    median makespan, and grows the latency by doubling until it turns
    unacceptable, then binary-searches the boundary. Returns 0 when even
    latency 1 is unacceptable, and the search ceiling (degenerate, with a
    warning) when every probe passes, which is what happens at p = 1.
    """
    if config.model != "divisible" or config.topology.layout != "single":
        raise ConfigError("limit latency search expects a divisible load on a single cluster")
    if max_latency is None:
        max_latency = total_work
    base = with_cell(config, total_work=total_work, num_procs=num_procs, latency=1)

    def ok(latency):
        probe = with_cell(base, latency=latency)
        makespans = [r.stats.makespan for r in run_scenario(probe)]
        return acceptable(int(statistics.median_low(makespans)), total_work, num_procs)

    if not ok(1):
        return 0
    low = 1
    high = 2
    while high <= max_latency and ok(high):
        low = high
        high *= 2
    if high > max_latency:
        logger.warning("every latency up to %d is acceptable; search is degenerate", max_latency)
        return max_latency
    while high - low > 1:
        mid = (low + high) // 2
        if ok(mid):
            low = mid
        else:
            high = mid
    return low


def compare_mwt_swt(config):
    """Paired runs of both steal-answer policies on identical seeds.

    Returns one row per seed with the startup-phase durations, their
    ratio (single-transfer over multi-transfer; > 1 means the
    multi-transfer policy started up faster), and the relative makespan
    difference. Pairs where either run never reaches full activity are
    marked invalid and carry no ratio.
    """
    rows = []
    swt = with_cell(config, simultaneous=False)
    mwt = with_cell(config, simultaneous=True)
    for i in range(config.replications):
        seed = config.base_seed + i
        rep_s = run_scenario(with_cell(swt, base_seed=seed, replications=1))[0]
        rep_m = run_scenario(with_cell(mwt, base_seed=seed, replications=1))[0]
        valid = (
            rep_s.stats.all_active_reached
            and rep_m.stats.all_active_reached
            and rep_s.stats.t_startup_end > 0
            and rep_m.stats.t_startup_end > 0
        )
        rows.append(
            {
                "seed": seed,
                "startup_swt": rep_s.stats.t_startup_end,
                "startup_mwt": rep_m.stats.t_startup_end,
                "startup_ratio": rep_s.stats.t_startup_end / rep_m.stats.t_startup_end if valid else None,
                "makespan_swt": rep_s.stats.makespan,
                "makespan_mwt": rep_m.stats.makespan,
                "rel_makespan_diff": (rep_m.stats.makespan - rep_s.stats.makespan) / rep_s.stats.makespan,
                "valid": valid,
            }
        )
    return rows


def quartiles(values):
    """(min, q1, median, q3, max) of a non-empty sample."""
    if len(values) == 0:
        raise ConfigError("quartiles need at least one value")
    arr = np.asarray(sorted(values), dtype=float)
    q1, med, q3 = np.percentile(arr, [25.0, 50.0, 75.0])
    return float(arr[0]), float(q1), float(med), float(q3), float(arr[-1])
