"""Processor state and the five scheduling operations.

A processor is ACTIVE while running a task, briefly idle while deciding
what to do next, and a thief (STEALING) while a steal request/answer
round trip is in flight. Task completions arrive as IDLE events; steal
traffic arrives as STEAL_REQUEST / STEAL_ANSWER events. All operations
take the simulation state explicitly so they stay plain functions.
"""
from __future__ import annotations

from .errors import SimulationError
from .events import Event, EventKind, StealPayload
from .tasks import steal_from_deque
from .tracing import ProcState


class Processor:
    __slots__ = ("pid", "cluster", "running_task", "deque", "idle_generation", "busy_until", "is_thief")

    def __init__(self, pid, cluster=0):
        self.pid = pid
        self.cluster = cluster
        self.running_task = None
        self.deque = []
        self.idle_generation = 0
        self.busy_until = 0
        self.is_thief = False

    def __repr__(self):
        running = self.running_task.tid if self.running_task is not None else None
        return f"Processor(P{self.pid}, running={running}, deque={len(self.deque)})"


def start_task(proc, task, state, now):
    """Begin executing a task and schedule its completion."""
    if proc.running_task is not None:
        raise SimulationError(f"P{proc.pid} already running task {proc.running_task.tid}")
    task.start_time = now
    task.executed_by = proc.pid
    proc.running_task = task
    proc.is_thief = False
    state.add_event(
        Event(now + state.application.get_work(task), EventKind.IDLE, proc.pid, generation=proc.idle_generation)
    )
    state.log.record_state(now, proc.pid, ProcState.ACTIVE)


def idle(proc, state, now):
    """Handle a completion instant: close the task, then find the next one.

    Newly ready children go to the back of the local deque, and the owner
    pops from the back too (newest first). With nothing local the
    processor turns thief; once the whole application is done it parks.
    """
    app = state.application
    task = proc.running_task
    if task is not None:
        proc.running_task = None
        state.log.note_completion(app.get_work(task), task.merge_inputs is not None)
        for tid in app.end_execute_task(task, now):
            proc.deque.append(app.tasks[tid])
    if app.is_finished():
        state.log.record_state(now, proc.pid, ProcState.IDLE)
        return
    if proc.deque:
        start_task(proc, proc.deque.pop(), state, now)
    else:
        start_stealing(proc, state, now)


def start_stealing(proc, state, now):
    """Pick a victim and send it a steal request (arrives after the distance)."""
    topo = state.topology
    if topo.num_procs == 1:
        # nothing to rob; the deadlock guard in the run loop reports this
        state.log.record_state(now, proc.pid, ProcState.IDLE)
        return
    victim = topo.select_victim(proc.pid, state.rng)
    proc.is_thief = True
    state.log.note_steal_request()
    state.add_event(Event(now + topo.distance(proc.pid, victim), EventKind.STEAL_REQUEST, victim, partner=proc.pid))
    state.log.record_state(now, proc.pid, ProcState.STEALING)


def answer_steal_request(victim, thief_id, state, now):
    """Serve one arriving steal request and send the answer back.

    Under single-work-transfer a victim whose previous grant is still in
    flight refuses without touching its task; otherwise it tries to give
    away ready or splittable work. The answer (grant or fail) travels the
    same distance back to the thief.
    """
    dist = state.topology.distance(victim.pid, thief_id)
    task = None
    if state.topology.policy.simultaneous or now >= victim.busy_until:
        task = get_part_of_work_if_exist(victim, state, now)
        if task is not None and not state.topology.policy.simultaneous:
            victim.busy_until = now + dist
    state.log.note_steal_answer(task is not None)
    state.add_event(
        Event(now + dist, EventKind.STEAL_ANSWER, thief_id, partner=victim.pid, payload=StealPayload(task, victim.pid))
    )


def get_part_of_work_if_exist(victim, state, now):
    """Extract work from a victim: a deque entry, or half its running task.

    Returns None when there is nothing to give: empty-handed victim, task
    at or below the steal threshold, or an unsplittable task. A successful
    split reschedules the victim's completion at the reduced time; the
    superseded completion event is invalidated by bumping the generation.
    """
    if victim.deque:
        return steal_from_deque(victim.deque)
    task = victim.running_task
    if task is None:
        return None
    app = state.application
    remaining = app.remaining_work(task, now)
    if remaining is None or remaining <= state.topology.steal_threshold():
        return None
    stolen = app.split(task, now)
    if stolen is None:
        return None
    victim.idle_generation += 1
    kept = task.work - (now - task.start_time)
    state.add_event(Event(now + kept, EventKind.IDLE, victim.pid, generation=victim.idle_generation))
    return stolen


def steal_answer(thief, payload, state, now):
    """Receive a steal answer: run the granted task, or try another victim."""
    if not thief.is_thief:
        raise SimulationError(f"P{thief.pid} got a steal answer while not stealing")
    if payload.task is not None:
        start_task(thief, payload.task, state, now)
    else:
        start_stealing(thief, state, now)
