from __future__ import annotations

import pytest

from stealsim import Event, EventKind, EventQueue, StealPayload


def test_empty_queue_pops_none():
    queue = EventQueue()
    assert queue.pop() is None
    assert len(queue) == 0
    assert not queue


def test_pop_returns_earliest():
    queue = EventQueue()
    queue.push(Event(9, EventKind.IDLE, 0))
    queue.push(Event(2, EventKind.IDLE, 1))
    first = queue.pop()
    assert first.time == 2 and first.subject == 1
    assert len(queue) == 1


def test_equal_times_dispatch_in_insertion_order():
    queue = EventQueue()
    a = Event(4, EventKind.IDLE, 0)
    b = Event(4, EventKind.IDLE, 1)
    queue.push(a)
    queue.push(b)
    assert queue.pop() is a
    assert queue.pop() is b
    assert queue.pop() is None


def test_insertion_order_survives_interleaved_pushes():
    queue = EventQueue()
    queue.push(Event(7, EventKind.IDLE, 0))
    queue.push(Event(3, EventKind.IDLE, 1))
    queue.push(Event(7, EventKind.IDLE, 2))
    queue.push(Event(3, EventKind.IDLE, 3))
    order = [(e.time, e.subject) for e in iter(queue.pop, None)]
    assert order == [(3, 1), (3, 3), (7, 0), (7, 2)]


def test_event_field_validation():
    with pytest.raises(ValueError):
        Event(-1, EventKind.IDLE, 0)
    with pytest.raises(ValueError):
        Event(0, EventKind.IDLE, 0, partner=1)
    with pytest.raises(ValueError):
        Event(0, EventKind.STEAL_REQUEST, 0)
    with pytest.raises(ValueError):
        Event(0, EventKind.STEAL_ANSWER, 0, partner=1)
    with pytest.raises(ValueError):
        Event(0, 99, 0)


def test_steal_payload_granted_flag():
    fail = StealPayload(None, victim=3)
    assert not fail.granted
    assert "fail" in repr(fail)
