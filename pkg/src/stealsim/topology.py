"""Platform topologies, victim selection, and steal policies.

Distances are integer communication latencies between processor pairs.
A single cluster puts the configured latency between every pair; the
clustered layouts use distance 1 inside a cluster and latency times the
number of cluster-graph hops between clusters (ring: shortest way
around, star: through the hub, complete: one hop).
"""
from __future__ import annotations

from .errors import ConfigError, SimulationError

LAYOUTS = ("single", "two", "multi")
INTERCONNECTS = ("ring", "star", "complete")
STRATEGIES = ("uniform", "local-first", "distance-weighted")


class VictimStrategy:
    """How a thief picks whom to rob.

    uniform: any other processor, equiprobable. local-first: with
    probability ``q`` a processor from the thief's own cluster (when one
    exists), otherwise a remote one. distance-weighted: probability
    proportional to 1/distance.
    """

    __slots__ = ("kind", "q")

    def __init__(self, kind="uniform", q=None):
        if kind not in STRATEGIES:
            raise ConfigError(f"unknown victim strategy: {kind!r}")
        if kind == "local-first":
            if q is None or not 0.0 <= q <= 1.0:
                raise ConfigError("local-first needs q in [0, 1]")
        elif q is not None:
            raise ConfigError(f"strategy {kind!r} takes no q parameter")
        self.kind = kind
        self.q = q

    def __repr__(self):
        return f"VictimStrategy({self.kind!r})" if self.q is None else f"VictimStrategy({self.kind!r}, q={self.q})"


class StealPolicy:
    """Steal-answer discipline plus the work threshold below which victims refuse.

    ``simultaneous`` False is single-work-transfer: a victim that granted
    work refuses further requests until the granted task has arrived at
    the thief. True is multi-work-transfer: every request is served on
    arrival, so several same-instant thieves each get half of what is
    left when their request is processed. The threshold is either a
    static amount or a multiple of the platform latency.
    """

    __slots__ = ("simultaneous", "threshold_mode", "threshold_value")

    def __init__(self, simultaneous=False, threshold_mode="static", threshold_value=0):
        if threshold_mode not in ("static", "latency-multiple"):
            raise ConfigError(f"unknown threshold mode: {threshold_mode!r}")
        if not isinstance(threshold_value, int) or threshold_value < 0:
            raise ConfigError(f"threshold value must be a non-negative integer, got {threshold_value!r}")
        self.simultaneous = bool(simultaneous)
        self.threshold_mode = threshold_mode
        self.threshold_value = threshold_value

    def __repr__(self):
        kind = "MWT" if self.simultaneous else "SWT"
        return f"StealPolicy({kind}, {self.threshold_mode}={self.threshold_value})"


class PlatformTopology:
    """Processor layout with pairwise distances and the steal configuration."""

    def __init__(
        self,
        num_procs,
        latency,
        layout="single",
        clusters=None,
        interconnect="complete",
        strategy=None,
        policy=None,
    ):
        if num_procs < 1:
            raise ConfigError(f"need at least one processor, got {num_procs}")
        if latency < 0:
            raise ConfigError(f"latency must be >= 0, got {latency}")
        if num_procs >= 2 and latency < 1:
            # latency 0 would let failed steals retry at the same instant forever
            raise ConfigError("latency must be >= 1 when there are two or more processors")
        if layout not in LAYOUTS:
            raise ConfigError(f"unknown layout: {layout!r}")
        if interconnect not in INTERCONNECTS:
            raise ConfigError(f"unknown interconnect: {interconnect!r}")

        if layout == "single":
            if clusters not in (None, 1):
                raise ConfigError("layout 'single' is a single cluster")
            clusters = 1
        elif layout == "two":
            if clusters not in (None, 2):
                raise ConfigError("layout 'two' is fixed at 2 clusters")
            clusters = 2
        else:
            if clusters is None or clusters < 1:
                raise ConfigError("layout 'multi' needs clusters >= 1")
        if clusters > num_procs:
            raise ConfigError(f"cannot spread {num_procs} processors over {clusters} clusters")

        self.num_procs = num_procs
        self.latency = latency
        self.layout = layout
        self.num_clusters = clusters
        self.interconnect = interconnect
        self.strategy = strategy if strategy is not None else VictimStrategy()
        self.policy = policy if policy is not None else StealPolicy()

        # contiguous, balanced blocks: the first (p % c) clusters get one extra
        base, extra = divmod(num_procs, clusters)
        self.cluster_of = []
        self.cluster_members = []
        pid = 0
        for c in range(clusters):
            size = base + (1 if c < extra else 0)
            self.cluster_members.append(list(range(pid, pid + size)))
            self.cluster_of.extend([c] * size)
            pid += size

        if self.policy.threshold_mode == "static":
            self._threshold = self.policy.threshold_value
        else:
            self._threshold = self.policy.threshold_value * latency

    def cluster_hops(self, a, b):
        """Hops between two clusters in the interconnect graph."""
        if a == b:
            return 0
        if self.interconnect == "complete" or self.num_clusters == 2:
            return 1
        if self.interconnect == "ring":
            around = abs(a - b)
            return min(around, self.num_clusters - around)
        # star: cluster 0 is the hub
        return 1 if a == 0 or b == 0 else 2

    def distance(self, i, j):
        """Latency between processors i and j (0 on the diagonal, symmetric)."""
        if not (0 <= i < self.num_procs and 0 <= j < self.num_procs):
            raise ConfigError(f"processor index out of range: ({i}, {j})")
        if i == j:
            return 0
        if self.layout == "single":
            return self.latency
        ci, cj = self.cluster_of[i], self.cluster_of[j]
        if ci == cj:
            return 1
        return self.latency * self.cluster_hops(ci, cj)

    def steal_threshold(self):
        """Remaining work at or below which a victim refuses to split."""
        return self._threshold

    def select_victim(self, thief, rng):
        """Draw a victim for ``thief`` according to the configured strategy."""
        p = self.num_procs
        if p < 2:
            raise SimulationError("no victim available on a one-processor platform")
        kind = self.strategy.kind
        if kind == "uniform":
            v = rng.randrange(p - 1)
            return v + 1 if v >= thief else v
        if kind == "local-first":
            local = [pid for pid in self.cluster_members[self.cluster_of[thief]] if pid != thief]
            remote = [pid for pid in range(p) if self.cluster_of[pid] != self.cluster_of[thief]]
            if local and (not remote or rng.random() < self.strategy.q):
                return local[rng.randrange(len(local))]
            if remote:
                return remote[rng.randrange(len(remote))]
            return local[rng.randrange(len(local))]
        # distance-weighted
        candidates = [pid for pid in range(p) if pid != thief]
        weights = [1.0 / self.distance(thief, pid) for pid in candidates]
        return rng.choices(candidates, weights=weights)[0]

    def __repr__(self):
        return (
            f"PlatformTopology(p={self.num_procs}, latency={self.latency}, "
            f"layout={self.layout}, clusters={self.num_clusters})"
        )
