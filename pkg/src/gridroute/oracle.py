"""Exact solver for small binary placement instances.

The production allocator is a greedy heuristic; this module holds the
ground truth it is measured against. An instance is the binary
assignment problem: every task picks exactly one admissible node, node
capacities are hard, and the objective is the plain weighted cost sum.
Instances are deliberately capped at 10 tasks x 5 nodes so exhaustive
search with pruning stays trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .allocator import _Env  # shared per-run caches
from .model import ScenarioConfig, hourly_slices

MAX_TASKS = 10
MAX_NODES = 5


@dataclass(frozen=True)
class OracleTask:
    """One indivisible task: its capacity demand and per-node total cost."""

    id: str
    demand: float
    costs: Mapping[str, float]
    feasible: tuple[str, ...]


@dataclass(frozen=True)
class OracleInstance:
    nodes: tuple[str, ...]
    capacity: Mapping[str, float]
    tasks: tuple[OracleTask, ...]


@dataclass(frozen=True)
class OracleSolution:
    """Assignment outcome; ``feasible`` False means no valid assignment
    exists (for the exact solver) or none was found (for greedy)."""

    feasible: bool
    assignment: Mapping[str, str] | None
    objective: float | None


def _check_size(instance: OracleInstance) -> None:
    if len(instance.tasks) > MAX_TASKS:
        raise ValueError(f"instance has {len(instance.tasks)} tasks; oracle limit is {MAX_TASKS}")
    if len(instance.nodes) > MAX_NODES:
        raise ValueError(f"instance has {len(instance.nodes)} nodes; oracle limit is {MAX_NODES}")


def exact_oracle(instance: OracleInstance) -> OracleSolution:
    """Globally optimal assignment by depth-first search with pruning.

    The lower bound adds each unassigned task's cheapest admissible
    cost, ignoring capacity, which never overestimates; branches at or
    above the incumbent are cut. Ties resolve toward the first node in
    (cost, id) order, so results are deterministic.
    """
    _check_size(instance)
    tasks = instance.tasks
    n = len(tasks)
    # per task: candidate nodes cheapest-first for tighter early incumbents
    options = [
        sorted(t.feasible, key=lambda node: (t.costs[node], node))
        for t in tasks
    ]
    cheapest = [min((t.costs[node] for node in t.feasible), default=float("inf")) for t in tasks]
    suffix_bound = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_bound[i] = suffix_bound[i + 1] + cheapest[i]

    best_objective = float("inf")
    best_assignment: list[str] | None = None
    remaining = dict(instance.capacity)
    chosen: list[str] = []

    def walk(i: int, cost_so_far: float) -> None:
        nonlocal best_objective, best_assignment
        if cost_so_far + suffix_bound[i] >= best_objective:
            return
        if i == n:
            best_objective = cost_so_far
            best_assignment = list(chosen)
            return
        task = tasks[i]
        for node in options[i]:
            if remaining[node] < task.demand:
                continue
            remaining[node] -= task.demand
            chosen.append(node)
            walk(i + 1, cost_so_far + task.costs[node])
            chosen.pop()
            remaining[node] += task.demand

    walk(0, 0.0)
    if best_assignment is None:
        return OracleSolution(feasible=False, assignment=None, objective=None)
    return OracleSolution(
        feasible=True,
        assignment={t.id: node for t, node in zip(tasks, best_assignment)},
        objective=best_objective,
    )


def greedy_assign(instance: OracleInstance) -> OracleSolution:
    """Greedy counterpart of the allocator on a binary instance.

    Tasks are taken in the given order; each grabs the cheapest
    admissible node that still has room for the whole task. Returns an
    infeasible solution the moment some task cannot fit anywhere.
    """
    _check_size(instance)
    remaining = dict(instance.capacity)
    assignment: dict[str, str] = {}
    total = 0.0
    for task in instance.tasks:
        candidates = [
            node for node in task.feasible if remaining[node] >= task.demand
        ]
        if not candidates:
            return OracleSolution(feasible=False, assignment=None, objective=None)
        node = min(candidates, key=lambda n: (task.costs[n], n))
        remaining[node] -= task.demand
        assignment[task.id] = node
        total += task.costs[node]
    return OracleSolution(feasible=True, assignment=assignment, objective=total)


def extract_instance(
    cfg: ScenarioConfig, hour: int, max_tasks: int = MAX_TASKS, capacity_scale: float | None = None
) -> OracleInstance:
    """Carve a small binary instance out of one scenario hour.

    Slices become indivisible tasks with their full mass. The node pool
    keeps the tasks' home regions plus the cheapest remote candidates,
    capped at five. Capacity defaults to the hour's capacity scaled by
    the selected share of total demand, so instances bind about as often
    as the full problem does.
    """
    if max_tasks > MAX_TASKS:
        raise ValueError(f"max_tasks {max_tasks} exceeds oracle limit {MAX_TASKS}")
    env = _Env(cfg)
    slices = [s for s in hourly_slices(cfg, hour) if s.mass > 0.0]

    pool: list[str] = []
    for piece in slices:
        home = env.services[piece.service_node].colocated_compute
        if home not in pool and len(pool) < 3:
            pool.append(home)
    selected = [
        s for s in slices
        if env.services[s.service_node].colocated_compute in pool
    ][:max_tasks]

    # fill the remaining pool slots with the overall cheapest outside nodes
    def mean_raw(node_id: str) -> float:
        return sum(
            env.unit(hour, s.task_class, s.service_node, node_id).raw_objective for s in selected
        ) / max(1, len(selected))

    outside = [n.id for n in cfg.nodes if n.id not in pool]
    outside.sort(key=lambda n: (mean_raw(n), n))
    pool.extend(outside[: MAX_NODES - len(pool)])
    pool = sorted(pool)

    tasks = []
    for piece in selected:
        feasible = tuple(
            n for n in env.feasible_ids(piece.task_class, piece.service_node) if n in pool
        )
        cls = env.classes[piece.task_class]
        costs = {
            n: env.unit(hour, piece.task_class, piece.service_node, n).raw_objective * piece.mass
            for n in pool
        }
        tasks.append(
            OracleTask(
                id=f"{piece.task_class}:{piece.service_node}",
                demand=cls.compute_demand * piece.mass,
                costs=costs,
                feasible=feasible,
            )
        )

    if capacity_scale is None:
        total_demand = sum(
            env.classes[s.task_class].compute_demand * s.mass for s in slices
        )
        selected_demand = sum(t.demand for t in tasks)
        capacity_scale = selected_demand / total_demand if total_demand > 0 else 1.0
    capacity = {n: cfg.node(n).capacity(hour) * capacity_scale for n in pool}

    return OracleInstance(nodes=tuple(pool), capacity=capacity, tasks=tuple(tasks))
