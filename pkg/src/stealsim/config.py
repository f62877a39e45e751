"""Scenario configuration: dataclasses, strict JSON parsing, and builders.

A scenario file is a JSON object whose keys mirror the configuration
fields: model, W or dag or application_file, merge_cost, topology
(layout, p, lambda, clusters, interconnect), strategy (kind, q), policy
(simultaneous, threshold), replications, base_seed, out_dir. Unknown
keys are rejected everywhere. In Python the W / p / lambda / n keys map
to the spelled-out attributes total_work / num_procs / latency /
replications (``lambda`` is reserved in the language).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .tasks import MergeCost, generate_dag, load_application, new_adaptive, new_divisible
from .topology import INTERCONNECTS, LAYOUTS, STRATEGIES, PlatformTopology, StealPolicy, VictimStrategy

MODELS = ("divisible", "dag", "adaptive")
DAG_KINDS = ("binary-tree", "fork-join", "merge-sort")


@dataclass
class TopologyConfig:
    num_procs: int = 1
    latency: int = 1
    layout: str = "single"
    clusters: int | None = None
    interconnect: str = "complete"


@dataclass
class StrategyConfig:
    kind: str = "uniform"
    q: float | None = None


@dataclass
class ThresholdConfig:
    mode: str = "static"
    value: int = 0


@dataclass
class PolicyConfig:
    simultaneous: bool = False
    threshold: ThresholdConfig = field(default_factory=ThresholdConfig)


@dataclass
class DagSpec:
    kind: str = "binary-tree"
    depth: int | None = None
    width: int | None = None
    leaves: int | None = None
    work: int = 1


@dataclass
class MergeCostConfig:
    kind: str = "constant"
    value: int = 1


@dataclass
class ScenarioConfig:
    """Everything one experiment cell needs; replication i runs with base_seed + i."""

    model: str = "divisible"
    total_work: int | None = None
    dag: DagSpec | None = None
    application_file: str | None = None
    merge_cost: MergeCostConfig | None = None
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    strategy: StrategyConfig = field(default_factory=StrategyConfig)
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    replications: int = 1
    base_seed: int = 0
    out_dir: str | None = None

    def validate(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model: {self.model!r}")
        sources = [x is not None for x in (self.total_work, self.dag, self.application_file)]
        if sum(sources) != 1:
            raise ConfigError("exactly one of W, dag, application_file must be given")
        if self.model == "dag":
            if self.total_work is not None:
                raise ConfigError("model 'dag' takes a dag spec or application_file, not W")
        else:
            if self.dag is not None:
                raise ConfigError(f"model {self.model!r} takes W or application_file, not a dag spec")
        if self.total_work is not None and self.total_work < 1:
            raise ConfigError(f"W must be >= 1, got {self.total_work}")
        if self.merge_cost is not None and self.model != "adaptive":
            raise ConfigError("merge_cost only applies to the adaptive model")
        if self.dag is not None and self.dag.kind not in DAG_KINDS:
            raise ConfigError(f"unknown dag kind: {self.dag.kind!r}")
        if self.topology.num_procs < 1:
            raise ConfigError(f"p must be >= 1, got {self.topology.num_procs}")
        if self.topology.latency < 0:
            raise ConfigError(f"lambda must be >= 0, got {self.topology.latency}")
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}")
        # full topology/strategy/policy validation happens in the builders
        build_topology(self)
        return self


def _require_keys(data, allowed, where):
    unknown = set(data) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown {where} keys: {sorted(unknown)}")


def _typed(data, key, types, where, default=None):
    if key not in data or data[key] is None:
        return default
    value = data[key]
    if types is int and isinstance(value, bool):
        raise ConfigError(f"{where}.{key} must be an integer")
    if not isinstance(value, types):
        raise ConfigError(f"{where}.{key} has the wrong type: {value!r}")
    return value


def parse_scenario(data):
    """Build a validated ScenarioConfig from a JSON string or a dict."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"scenario is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object")
    _require_keys(
        data,
        (
            "model",
            "W",
            "dag",
            "application_file",
            "merge_cost",
            "topology",
            "strategy",
            "policy",
            "replications",
            "base_seed",
            "out_dir",
        ),
        "scenario",
    )

    config = ScenarioConfig()
    config.model = _typed(data, "model", str, "scenario", "divisible")
    config.total_work = _typed(data, "W", int, "scenario")
    config.application_file = _typed(data, "application_file", str, "scenario")
    config.replications = _typed(data, "replications", int, "scenario", 1)
    config.base_seed = _typed(data, "base_seed", int, "scenario", 0)
    config.out_dir = _typed(data, "out_dir", str, "scenario")

    if data.get("dag") is not None:
        sub = data["dag"]
        if not isinstance(sub, dict):
            raise ConfigError("dag must be an object")
        _require_keys(sub, ("kind", "depth", "width", "leaves", "work"), "dag")
        config.dag = DagSpec(
            kind=_typed(sub, "kind", str, "dag", "binary-tree"),
            depth=_typed(sub, "depth", int, "dag"),
            width=_typed(sub, "width", int, "dag"),
            leaves=_typed(sub, "leaves", int, "dag"),
            work=_typed(sub, "work", int, "dag", 1),
        )

    if data.get("merge_cost") is not None:
        sub = data["merge_cost"]
        if not isinstance(sub, dict):
            raise ConfigError("merge_cost must be an object")
        _require_keys(sub, ("kind", "value"), "merge_cost")
        config.merge_cost = MergeCostConfig(
            kind=_typed(sub, "kind", str, "merge_cost", "constant"),
            value=_typed(sub, "value", int, "merge_cost", 1),
        )

    if data.get("topology") is not None:
        sub = data["topology"]
        if not isinstance(sub, dict):
            raise ConfigError("topology must be an object")
        _require_keys(sub, ("layout", "p", "lambda", "clusters", "interconnect"), "topology")
        config.topology = TopologyConfig(
            num_procs=_typed(sub, "p", int, "topology", 1),
            latency=_typed(sub, "lambda", int, "topology", 1),
            layout=_typed(sub, "layout", str, "topology", "single"),
            clusters=_typed(sub, "clusters", int, "topology"),
            interconnect=_typed(sub, "interconnect", str, "topology", "complete"),
        )

    if data.get("strategy") is not None:
        sub = data["strategy"]
        if not isinstance(sub, dict):
            raise ConfigError("strategy must be an object")
        _require_keys(sub, ("kind", "q"), "strategy")
        config.strategy = StrategyConfig(
            kind=_typed(sub, "kind", str, "strategy", "uniform"),
            q=_typed(sub, "q", (int, float), "strategy"),
        )

    if data.get("policy") is not None:
        sub = data["policy"]
        if not isinstance(sub, dict):
            raise ConfigError("policy must be an object")
        _require_keys(sub, ("simultaneous", "threshold"), "policy")
        simultaneous = sub.get("simultaneous", False)
        if not isinstance(simultaneous, bool):
            raise ConfigError("policy.simultaneous must be true or false")
        threshold = ThresholdConfig()
        if sub.get("threshold") is not None:
            tsub = sub["threshold"]
            if not isinstance(tsub, dict):
                raise ConfigError("threshold must be an object")
            _require_keys(tsub, ("mode", "value"), "threshold")
            threshold = ThresholdConfig(
                mode=_typed(tsub, "mode", str, "threshold", "static"),
                value=_typed(tsub, "value", int, "threshold", 0),
            )
        config.policy = PolicyConfig(simultaneous=simultaneous, threshold=threshold)

    return config.validate()


def load_scenario(path):
    with open(path) as fh:
        text = fh.read()
    return parse_scenario(text)


def scenario_to_dict(config):
    """Inverse of parse_scenario, for writing scenario files."""
    data = {
        "model": config.model,
        "topology": {
            "layout": config.topology.layout,
            "p": config.topology.num_procs,
            "lambda": config.topology.latency,
            "clusters": config.topology.clusters,
            "interconnect": config.topology.interconnect,
        },
        "strategy": {"kind": config.strategy.kind, "q": config.strategy.q},
        "policy": {
            "simultaneous": config.policy.simultaneous,
            "threshold": {"mode": config.policy.threshold.mode, "value": config.policy.threshold.value},
        },
        "replications": config.replications,
        "base_seed": config.base_seed,
    }
    if config.total_work is not None:
        data["W"] = config.total_work
    if config.dag is not None:
        data["dag"] = {k: v for k, v in vars(config.dag).items() if v is not None}
    if config.application_file is not None:
        data["application_file"] = config.application_file
    if config.merge_cost is not None:
        data["merge_cost"] = {"kind": config.merge_cost.kind, "value": config.merge_cost.value}
    if config.out_dir is not None:
        data["out_dir"] = config.out_dir
    return data


def build_topology(config):
    """Construct the PlatformTopology a scenario describes."""
    topo = config.topology
    if config.strategy.kind not in STRATEGIES:
        raise ConfigError(f"unknown victim strategy: {config.strategy.kind!r}")
    if topo.layout not in LAYOUTS:
        raise ConfigError(f"unknown layout: {topo.layout!r}")
    if topo.interconnect not in INTERCONNECTS:
        raise ConfigError(f"unknown interconnect: {topo.interconnect!r}")
    strategy = VictimStrategy(config.strategy.kind, config.strategy.q)
    policy = StealPolicy(
        simultaneous=config.policy.simultaneous,
        threshold_mode=config.policy.threshold.mode,
        threshold_value=config.policy.threshold.value,
    )
    return PlatformTopology(
        num_procs=topo.num_procs,
        latency=topo.latency,
        layout=topo.layout,
        clusters=topo.clusters,
        interconnect=topo.interconnect,
        strategy=strategy,
        policy=policy,
    )


def build_application(config, seed=0):
    """Construct a fresh Application for one replication.

    ``seed`` is reserved for randomized task graphs; the stock shapes are
    deterministic, so every replication runs the same application and the
    randomness lives entirely in victim selection.
    """
    del seed
    model = config.model
    if config.application_file is not None:
        merge_cost = None
        if config.merge_cost is not None:
            merge_cost = MergeCost(config.merge_cost.kind, config.merge_cost.value)
        with open(config.application_file) as fh:
            app = load_application(fh.read(), merge_cost=merge_cost)
        if app.model.value != model:
            raise ConfigError(f"scenario model {model!r} but application file says {app.model.value!r}")
        app.reset_execution()
        return app
    if model == "divisible":
        return new_divisible(config.total_work)
    if model == "adaptive":
        merge_cost = None
        if config.merge_cost is not None:
            merge_cost = MergeCost(config.merge_cost.kind, config.merge_cost.value)
        return new_adaptive(config.total_work, merge_cost=merge_cost)
    # dag
    spec = config.dag
    return generate_dag(spec.kind, depth=spec.depth, width=spec.width, leaves=spec.leaves, work=spec.work)


def with_cell(config, **overrides):
    """Copy a config, overriding sweep-axis values.

    Supported axes: total_work (W), num_procs (p), latency (lambda),
    simultaneous (policy), threshold_value, replications, base_seed.
    """
    cfg = replace(config)
    topo = replace(config.topology)
    policy = replace(config.policy, threshold=replace(config.policy.threshold))
    cfg.topology = topo
    cfg.strategy = replace(config.strategy)
    cfg.policy = policy
    if cfg.dag is not None:
        cfg.dag = replace(cfg.dag)
    if cfg.merge_cost is not None:
        cfg.merge_cost = replace(cfg.merge_cost)
    for key, value in overrides.items():
        if key == "total_work":
            cfg.total_work = value
        elif key == "num_procs":
            topo.num_procs = value
        elif key == "latency":
            topo.latency = value
        elif key == "simultaneous":
            policy.simultaneous = value
        elif key == "threshold_value":
            policy.threshold.value = value
        elif key == "replications":
            cfg.replications = value
        elif key == "base_seed":
            cfg.base_seed = value
        else:
            raise ConfigError(f"unknown override: {key!r}")
    return cfg.validate()
