"""Simulation state, initialization, and the event loop."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DeadlockError, SimulationError
from .events import Event, EventKind, EventQueue
from .processors import Processor, answer_steal_request, idle, start_task, steal_answer
from .tracing import TraceLog


class SimulationState:
    """Everything one run touches: clock, queue, processors, tasks, log, RNG."""

    __slots__ = ("clock", "queue", "processors", "application", "topology", "log", "rng", "seed")

    def __init__(self, application, topology, seed=0):
        self.clock = 0
        self.queue = EventQueue()
        self.processors = [Processor(pid, topology.cluster_of[pid]) for pid in range(topology.num_procs)]
        self.application = application
        self.topology = topology
        self.log = TraceLog(topology.num_procs)
        self.rng = random.Random(seed)
        self.seed = seed

    def add_event(self, event):
        """Insert an event; scheduling into the past is a hard error."""
        if event.time < self.clock:
            raise SimulationError(f"event at {event.time} is before the clock ({self.clock}): {event!r}")
        self.queue.push(event)

    def next_event(self):
        """Earliest pending event (insertion order breaks time ties), or None."""
        return self.queue.pop()


@dataclass
class SimulationReport:
    """Result of one run. ``log`` and ``application`` may be stripped to save memory."""

    seed: int
    stats: object
    log: object = None
    application: object = None

    @property
    def makespan(self):
        return self.stats.makespan


def initialize(config, seed):
    """Build the ready-to-run state for a scenario.

    Processor 0 starts executing the application's source task at time 0
    (its completion event is already scheduled); every other processor
    gets an immediate idle event, so they all start hunting for work at
    time 0.
    """
    from .config import build_application, build_topology

    application = build_application(config, seed)
    topology = build_topology(config)
    state = SimulationState(application, topology, seed)
    start_task(state.processors[0], application.source_task(), state, 0)
    for pid in range(1, topology.num_procs):
        state.add_event(Event(0, EventKind.IDLE, pid, generation=0))
    return state


def run(state):
    """Dispatch events until the last task completes; that instant is the makespan.

    Anything still scheduled after the completing event (in-flight steal
    requests or refusals) is abandoned unprocessed.
    """
    app = state.application
    queue = state.queue
    processors = state.processors
    makespan = None
    while True:
        event = queue.pop()
        if event is None:
            raise DeadlockError(
                f"event queue drained with {app.created_count - app.completed_count} tasks unfinished"
            )
        now = event.time
        state.clock = now
        kind = event.kind
        proc = processors[event.subject]
        if kind == EventKind.IDLE:
            if event.generation != proc.idle_generation:
                continue  # superseded by a split
            idle(proc, state, now)
            if app.completed_count == app.created_count:
                makespan = now
                break
        elif kind == EventKind.STEAL_REQUEST:
            answer_steal_request(proc, event.partner, state, now)
        else:
            steal_answer(proc, event.payload, state, now)
    stats = state.log.finalize(makespan)
    return SimulationReport(seed=state.seed, stats=stats, log=state.log, application=app)
