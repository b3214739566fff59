"""Feasible placement sets under latency budgets and placement masks.

A node is feasible for a (class, source) pair when both the legal and
system masks allow it and the end-to-end latency fits the class budget
after the system-wide multiplier. The set expands monotonically as the
multiplier grows; that property is exposed as a checkable predicate
rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .latency import end_to_end_ms
from .model import ScenarioConfig, ServiceNode, TaskClass, effective_budget


@dataclass(frozen=True)
class FeasibleSet:
    """Admissible nodes for one (class, source, hour), ordered by latency.

    Entries are (node id, end-to-end ms) pairs sorted ascending by
    latency with node id breaking ties. May be empty; the allocator
    then falls back to the colocated node.
    """

    task_class: str
    service_node: str
    hour: int
    entries: tuple[tuple[str, float], ...]

    def node_ids(self) -> tuple[str, ...]:
        return tuple(node for node, _ in self.entries)

    def __contains__(self, node_id: str) -> bool:
        return any(node == node_id for node, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def is_feasible(cfg: ScenarioConfig, service: ServiceNode, task_class: TaskClass, node_id: str) -> bool:
    """True when the node passes both masks and meets the latency budget."""
    if not cfg.mask_allows(task_class.id, node_id):
        return False
    budget = effective_budget(task_class, cfg.latency_multiplier)
    return end_to_end_ms(cfg, service, task_class, node_id) <= budget


def feasible_set(cfg: ScenarioConfig, service: ServiceNode, task_class: TaskClass, hour: int = 0) -> FeasibleSet:
    """All nodes admissible for the pair, sorted by (latency, node id)."""
    budget = effective_budget(task_class, cfg.latency_multiplier)
    entries = []
    for node in cfg.nodes:
        if not cfg.mask_allows(task_class.id, node.id):
            continue
        latency = end_to_end_ms(cfg, service, task_class, node.id)
        if latency <= budget:
            entries.append((node.id, latency))
    entries.sort(key=lambda e: (e[1], e[0]))
    return FeasibleSet(
        task_class=task_class.id,
        service_node=service.id,
        hour=hour,
        entries=tuple(entries),
    )


def assert_monotone_expansion(
    cfg: ScenarioConfig,
    service: ServiceNode,
    task_class: TaskClass,
    multiplier_low: float,
    multiplier_high: float,
    hour: int = 0,
) -> bool:
    """Check that relaxing the budget never shrinks the feasible set.

    Returns True iff the feasible set at the lower multiplier is a
    subset of the set at the higher one. This must hold for any valid
    scenario; it is exposed as a predicate so tests can hammer it with
    randomized inputs instead of trusting the implementation.
    """
    if multiplier_low > multiplier_high:
        raise ValueError("multiplier_low must not exceed multiplier_high")
    low = set(feasible_set(cfg.with_multiplier(multiplier_low), service, task_class, hour).node_ids())
    high = set(feasible_set(cfg.with_multiplier(multiplier_high), service, task_class, hour).node_ids())
    return low <= high
