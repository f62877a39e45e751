"""Event types and the time-ordered event queue.

The whole simulation advances by dispatching three kinds of events:
a processor finishing its current task (IDLE), a steal request arriving
at a victim, and a steal answer arriving back at the thief. Requests and
answers travel for ``distance(thief, victim)`` time units, so remote
communication is modelled purely by when these events fire.
"""
from __future__ import annotations

import heapq
from enum import IntEnum


class EventKind(IntEnum):
    IDLE = 0
    STEAL_REQUEST = 1
    STEAL_ANSWER = 2


class StealPayload:
    """Answer carried back to a thief: a granted task, or None for a refusal."""

    __slots__ = ("task", "victim")

    def __init__(self, task, victim):
        self.task = task
        self.victim = victim

    @property
    def granted(self):
        return self.task is not None

    def __repr__(self):
        what = f"task {self.task.tid}" if self.task is not None else "fail"
        return f"StealPayload({what} from P{self.victim})"


class Event:
    """One scheduled occurrence.

    ``subject`` is the processor the event happens at. For STEAL_REQUEST it
    is the victim and ``partner`` the thief; for STEAL_ANSWER it is the
    thief and ``partner`` the victim. ``generation`` matters only for IDLE
    events: a task completion scheduled before a split vanished is detected
    by comparing it against the processor's current generation counter.
    """

    __slots__ = ("time", "kind", "subject", "partner", "payload", "generation", "seq")

    def __init__(self, time, kind, subject, partner=None, payload=None, generation=0):
        if time < 0:
            raise ValueError(f"event time must be >= 0, got {time}")
        if kind == EventKind.IDLE:
            if partner is not None or payload is not None:
                raise ValueError("IDLE events carry no partner or payload")
        elif kind == EventKind.STEAL_REQUEST:
            if partner is None:
                raise ValueError("STEAL_REQUEST events need the thief as partner")
        elif kind == EventKind.STEAL_ANSWER:
            if partner is None or payload is None:
                raise ValueError("STEAL_ANSWER events need a partner and a payload")
        else:
            raise ValueError(f"unknown event kind: {kind!r}")
        self.time = time
        self.kind = EventKind(kind)
        self.subject = subject
        self.partner = partner
        self.payload = payload
        self.generation = generation
        self.seq = -1  # assigned on insertion

    def __repr__(self):
        extra = "" if self.partner is None else f", partner=P{self.partner}"
        return f"Event(t={self.time}, {self.kind.name}, P{self.subject}{extra})"


class EventQueue:
    """Min-heap of events ordered by (time, insertion order).

    Two events at the same instant dispatch in insertion order, which is
    what makes same-time steal traffic deterministic.
    """

    __slots__ = ("_heap", "_next_seq")

    def __init__(self):
        self._heap = []
        self._next_seq = 0

    def push(self, event):
        event.seq = self._next_seq
        self._next_seq += 1
        heapq.heappush(self._heap, (event.time, event.seq, event))

    def pop(self):
        """Remove and return the earliest event, or None if empty."""
        if not self._heap:
            return None
        return heapq.heappop(self._heap)[2]

    def __len__(self):
        return len(self._heap)

    def __bool__(self):
        return bool(self._heap)
