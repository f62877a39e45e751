"""Task models: divisible load, DAG applications, and adaptive tasks.

All three models expose the same surface to the scheduler (init_task,
split, end_execute_task, get_work, is_finished), so the simulation core
never branches on the application type. What differs is divisibility:
a divisible-load task halves its remaining work when robbed, a DAG task
moves whole or not at all, and an adaptive task halves like divisible
load but each split additionally creates a merge task that waits for
both halves.
"""
from __future__ import annotations

import json
from enum import Enum

from .errors import ConfigError, SimulationError


class TaskModel(str, Enum):
    DIVISIBLE = "divisible"
    DAG = "dag"
    ADAPTIVE = "adaptive"


class MergeCost:
    """Duration model for adaptive merge tasks.

    ``constant`` charges a flat value (default 1) per merge; ``linear``
    charges value * (left + right) where left/right are the input sizes.
    """

    __slots__ = ("kind", "value")

    def __init__(self, kind="constant", value=1):
        if kind not in ("constant", "linear"):
            raise ConfigError(f"unknown merge cost kind: {kind!r}")
        if not isinstance(value, int) or value < 0:
            raise ConfigError(f"merge cost value must be a non-negative integer, got {value!r}")
        self.kind = kind
        self.value = value

    def __call__(self, left, right):
        if self.kind == "constant":
            return self.value
        return self.value * (left + right)

    def __repr__(self):
        return f"MergeCost({self.kind}, {self.value})"


class Task:
    __slots__ = (
        "tid",
        "work",
        "children",
        "unfinished_parents",
        "start_time",
        "end_time",
        "executed_by",
        "height",
        "merge_inputs",
    )

    def __init__(self, tid, work):
        self.tid = tid
        self.work = work
        self.children = []
        self.unfinished_parents = 0
        self.start_time = None
        self.end_time = None
        self.executed_by = None
        self.height = 1
        self.merge_inputs = None

    @property
    def is_merge(self):
        return self.merge_inputs is not None

    def __repr__(self):
        return f"Task({self.tid}, work={self.work}, height={self.height})"


class Application:
    """A set of tasks under one of the three models.

    ``total_work`` is the work the application was built with; merge tasks
    created by adaptive splits are extra on top of it and are accounted
    separately. ``split_edges`` records (victim task, stolen task) pairs so
    an executed divisible/adaptive run can be exported as a dependency
    graph.
    """

    def __init__(self, model, merge_cost=None):
        self.model = TaskModel(model)
        self.merge_cost = merge_cost if merge_cost is not None else MergeCost()
        self.tasks = {}
        self.created_count = 0
        self.completed_count = 0
        self.total_work = 0
        self.critical_path = 1
        self.split_edges = []
        self.root_id = None
        self._next_id = 0

    def init_task(self, work, parents=()):
        """Create a task; ``parents`` wires precedence edges from existing tasks."""
        if not isinstance(work, int) or work < 0:
            raise ConfigError(f"task work must be a non-negative integer, got {work!r}")
        tid = self._next_id
        self._next_id += 1
        task = Task(tid, work)
        task.unfinished_parents = len(parents)
        for pid in parents:
            self.tasks[pid].children.append(tid)
        self.tasks[tid] = task
        self.created_count += 1
        if self.root_id is None:
            self.root_id = tid
        return task

    def get_work(self, task):
        """Execution duration of a task (its current work amount)."""
        return task.work

    def remaining_work(self, task, now):
        """Work still to run on an executing task; None if it can never split."""
        if self.model is TaskModel.DAG or task.merge_inputs is not None:
            return None
        return task.work - (now - task.start_time)

    def split(self, task, now):
        """Carve half of a running task's remaining work into a new task.

        Returns the stolen task, or None when the task is indivisible
        (DAG tasks, merge tasks, remaining < 2). The victim task keeps
        running with its work reduced by the stolen amount. Under the
        adaptive model a merge task is also created, child of both halves.
        """
        if self.model is TaskModel.DAG or task.merge_inputs is not None:
            return None
        if task.start_time is None or task.start_time > now:
            raise SimulationError(f"cannot split task {task.tid}: not running at {now}")
        remaining = task.work - (now - task.start_time)
        if remaining < 2:
            return None
        stolen_work = remaining // 2
        task.work -= stolen_work
        stolen = self.init_task(stolen_work)
        self.split_edges.append((task.tid, stolen.tid))
        if self.model is TaskModel.ADAPTIVE:
            kept = task.work - (now - task.start_time)
            merge = self.init_task(0, parents=(task.tid, stolen.tid))
            merge.merge_inputs = (kept, stolen_work)
            merge.work = self.merge_cost(kept, stolen_work)
        return stolen

    def end_execute_task(self, task, now):
        """Mark a task completed; return ids of children that just became ready."""
        if task.end_time is not None:
            raise SimulationError(f"task {task.tid} completed twice")
        task.end_time = now
        self.completed_count += 1
        ready = []
        for cid in task.children:
            child = self.tasks[cid]
            child.unfinished_parents -= 1
            if child.unfinished_parents == 0:
                ready.append(cid)
        return ready

    def is_finished(self):
        return self.completed_count == self.created_count

    def source_task(self):
        """The task the whole run starts from (on processor 0)."""
        if self.root_id is None:
            raise ConfigError("application has no tasks")
        return self.tasks[self.root_id]

    def executed_work(self):
        """(regular, merge) work completed so far."""
        regular = 0
        merge = 0
        for task in self.tasks.values():
            if task.end_time is None:
                continue
            if task.merge_inputs is not None:
                merge += task.work
            else:
                regular += task.work
        return regular, merge

    def reset_execution(self):
        """Clear any recorded execution so the application can run fresh."""
        indegree = {tid: 0 for tid in self.tasks}
        for task in self.tasks.values():
            task.start_time = None
            task.end_time = None
            task.executed_by = None
            for cid in task.children:
                indegree[cid] += 1
        for tid, task in self.tasks.items():
            task.unfinished_parents = indegree[tid]
        self.completed_count = 0
        self.split_edges = []

    def __repr__(self):
        return (
            f"Application({self.model.value}, tasks={self.created_count}, "
            f"done={self.completed_count}, W={self.total_work})"
        )


def new_divisible(total_work):
    """A divisible-load application: one big task of ``total_work`` units."""
    if total_work < 1:
        raise ConfigError(f"total work must be >= 1, got {total_work}")
    app = Application(TaskModel.DIVISIBLE)
    app.init_task(total_work)
    app.total_work = total_work
    return app


def new_adaptive(total_work, merge_cost=None):
    """Like new_divisible, but splits spawn merge tasks with the given cost model."""
    if total_work < 1:
        raise ConfigError(f"total work must be >= 1, got {total_work}")
    app = Application(TaskModel.ADAPTIVE, merge_cost=merge_cost)
    app.init_task(total_work)
    app.total_work = total_work
    return app


def _assign_heights(app):
    """Validate the graph and set per-task heights.

    Heights count tasks on the longest downward path: a sink has height 1
    and the source's height equals the critical path length. Raises on
    cycles, on a graph with no unique source, and on dangling child ids.
    """
    tasks = app.tasks
    indegree = {tid: 0 for tid in tasks}
    for task in tasks.values():
        seen = set()
        for cid in task.children:
            if cid not in tasks:
                raise ConfigError(f"task {task.tid} lists unknown child {cid}")
            if cid in seen:
                raise ConfigError(f"task {task.tid} lists child {cid} twice")
            seen.add(cid)
            indegree[cid] += 1

    sources = [tid for tid, deg in indegree.items() if deg == 0]
    order = []
    frontier = list(sources)
    degrees = dict(indegree)
    while frontier:
        tid = frontier.pop()
        order.append(tid)
        for cid in tasks[tid].children:
            degrees[cid] -= 1
            if degrees[cid] == 0:
                frontier.append(cid)
    if len(order) != len(tasks):
        raise ConfigError("task graph contains a dependency cycle")
    if len(sources) != 1:
        raise ConfigError(f"task graph must have exactly one source, found {len(sources)}")

    level = {tid: 0 for tid in tasks}
    for tid in order:
        for cid in tasks[tid].children:
            if level[tid] + 1 > level[cid]:
                level[cid] = level[tid] + 1
    depth = max(level.values()) + 1
    for tid, task in tasks.items():
        task.height = depth - level[tid]
    app.critical_path = depth
    app.root_id = sources[0]
    for tid, task in tasks.items():
        task.unfinished_parents = indegree[tid]
    return app


def generate_dag(kind, *, depth=None, width=None, leaves=None, work=1):
    """Build one of the stock DAG shapes: binary-tree, fork-join, merge-sort.

    Every task carries ``work`` units (default 1). binary-tree takes
    ``depth`` levels; fork-join fans out to ``width`` parallel tasks
    between a fork and a join; merge-sort builds the split/leaf/join
    recursion over ``leaves`` base blocks.
    """
    if work < 1:
        raise ConfigError(f"task work must be >= 1, got {work}")
    app = Application(TaskModel.DAG)

    if kind == "binary-tree":
        if depth is None or depth < 1:
            raise ConfigError("binary-tree needs depth >= 1")
        prev = [app.init_task(work).tid]
        for _ in range(depth - 1):
            prev = [app.init_task(work, parents=(pid,)).tid for pid in prev for _ in range(2)]
    elif kind == "fork-join":
        if width is None or width < 1:
            raise ConfigError("fork-join needs width >= 1")
        fork = app.init_task(work)
        mids = [app.init_task(work, parents=(fork.tid,)).tid for _ in range(width)]
        app.init_task(work, parents=tuple(mids))
    elif kind == "merge-sort":
        if leaves is None or leaves < 1:
            raise ConfigError("merge-sort needs leaves >= 1")

        def build(n, parents):
            if n == 1:
                return app.init_task(work, parents=parents).tid
            splitter = app.init_task(work, parents=parents)
            left = build(n // 2, (splitter.tid,))
            right = build(n - n // 2, (splitter.tid,))
            return app.init_task(work, parents=(left, right)).tid

        build(leaves, ())
    else:
        raise ConfigError(f"unknown DAG kind: {kind!r}")

    app.total_work = sum(t.work for t in app.tasks.values())
    return _assign_heights(app)


def steal_from_deque(entries):
    """Remove and return the ready task with the largest height (ties: oldest).

    Tasks high in the graph head larger subtrees, so thieves take those;
    the owner itself pops from the back (newest) instead.
    """
    if not entries:
        raise SimulationError("cannot steal from an empty deque")
    best = 0
    for i in range(1, len(entries)):
        if entries[i].height > entries[best].height:
            best = i
    return entries.pop(best)


_TASK_KEYS = {"id", "work", "children", "start_time", "end_time", "thread_id"}


def load_application(text, merge_cost=None):
    """Parse an application from its JSON description.

    The document holds a ``model`` name and a ``tasks`` list; each task has
    an id, its work, and the ids of its children, plus optional recorded
    execution fields (start_time, end_time, thread_id). The graph must be
    acyclic with a single source. Unknown keys are rejected.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"application file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("application file must hold a JSON object")
    unknown = set(data) - {"model", "tasks"}
    if unknown:
        raise ConfigError(f"unknown application keys: {sorted(unknown)}")
    if "model" not in data or "tasks" not in data:
        raise ConfigError("application file needs 'model' and 'tasks'")
    try:
        model = TaskModel(data["model"])
    except ValueError:
        raise ConfigError(f"unknown task model: {data['model']!r}") from None
    if not isinstance(data["tasks"], list) or not data["tasks"]:
        raise ConfigError("'tasks' must be a non-empty list")

    app = Application(model, merge_cost=merge_cost)
    for entry in data["tasks"]:
        if not isinstance(entry, dict):
            raise ConfigError("each task must be a JSON object")
        unknown = set(entry) - _TASK_KEYS
        if unknown:
            raise ConfigError(f"unknown task keys: {sorted(unknown)}")
        for key in ("id", "work", "children"):
            if key not in entry:
                raise ConfigError(f"task entry missing {key!r}")
        tid = entry["id"]
        if not isinstance(tid, int) or tid < 0:
            raise ConfigError(f"task id must be a non-negative integer, got {tid!r}")
        if tid in app.tasks:
            raise ConfigError(f"duplicate task id {tid}")
        if not isinstance(entry["work"], int) or entry["work"] < 0:
            raise ConfigError(f"task {tid} work must be a non-negative integer")
        if not isinstance(entry["children"], list):
            raise ConfigError(f"task {tid} children must be a list of ids")
        task = Task(tid, entry["work"])
        task.children = list(entry["children"])
        task.start_time = entry.get("start_time")
        task.end_time = entry.get("end_time")
        task.executed_by = entry.get("thread_id")
        app.tasks[tid] = task

    app.created_count = len(app.tasks)
    app._next_id = max(app.tasks) + 1
    _assign_heights(app)
    app.completed_count = sum(1 for t in app.tasks.values() if t.end_time is not None)
    app.total_work = sum(t.work for t in app.tasks.values())
    return app


def dump_application(app):
    """Serialize an application (executed or not) back to its JSON form.

    Split edges recorded during a run are merged into the children lists,
    so the export of a divisible run is the dependency graph the steals
    carved out. load(dump(app)) preserves ids, work, and children.
    """
    extra_children = {}
    for src, dst in app.split_edges:
        extra_children.setdefault(src, []).append(dst)
    payload = []
    for tid in sorted(app.tasks):
        task = app.tasks[tid]
        payload.append(
            {
                "id": tid,
                "work": task.work,
                "children": task.children + extra_children.get(tid, []),
                "start_time": task.start_time,
                "end_time": task.end_time,
                "thread_id": task.executed_by,
            }
        )
    return json.dumps({"model": app.model.value, "tasks": payload}, indent=2)
