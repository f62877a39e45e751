"""Exception types shared across the simulator."""
from __future__ import annotations


class SimulationError(Exception):
    """An internal consistency rule was violated while a run was in progress."""


class DeadlockError(SimulationError):
    """The event queue drained before the application completed."""


class ConfigError(ValueError):
    """A scenario, topology, or application description is invalid."""
