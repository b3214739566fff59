"""Routing policies and the hourly capacity-constrained allocator.

Each slice of divisible demand ranks the compute nodes it may use, then
pours its mass into them in order while hourly capacity lasts. Slices
are processed in a fixed order (class A first, then service node id) so
contention for scarce capacity resolves the same way on every run.
When a slice exhausts every admissible node, the remainder lands on its
colocated node regardless of capacity; that forced remainder is the
only way a placement can break either the capacity bound (reported as
overflow) or the latency bound (flagged as a violation).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .costs import UnitCost, unit_cost
from .feasibility import feasible_set
from .model import PolicyWeights, ScenarioConfig, WorkloadSlice, hourly_slices

POLICY_KINDS = ("local_only", "nearest_region", "price_only", "carbon_only", "joint")

# Forced-local remainders smaller than this fraction of the slice are
# float dust from capacity subtraction, not real spill; they are folded
# into the last poured placement instead.
_DUST = 1e-12


@dataclass(frozen=True)
class Policy:
    """A routing rule; ``weights`` optionally overrides the scenario's
    objective weights and only matters for the joint kind."""

    kind: str
    weights: PolicyWeights | None = None

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}; expected one of {POLICY_KINDS}")


@dataclass(frozen=True)
class Placement:
    """One (node, mass) piece of a slice with its per-unit economics."""

    node: str
    fraction: float
    mass: float
    latency_ms: float
    cost: UnitCost
    violation: bool
    forced: bool


@dataclass(frozen=True)
class AssignmentRecord:
    """Realized placement of one workload slice across compute nodes."""

    slice: WorkloadSlice
    placements: tuple[Placement, ...]
    violation_flag: bool


@dataclass(frozen=True)
class HourResult:
    hour: int
    records: tuple[AssignmentRecord, ...]
    overflow: Mapping[str, float]  # compute-units beyond capacity, forced-local only


@dataclass(frozen=True)
class Trace:
    """Full assignment history of one policy over the horizon."""

    scenario_id: str
    policy: str
    latency_multiplier: float
    hours: tuple[HourResult, ...]

    def records(self) -> Iterable[AssignmentRecord]:
        for hour_result in self.hours:
            yield from hour_result.records


class _Env:
    """Per-run caches: feasible sets are hour-independent and unit costs
    repeat across slices, so both are memoized for the whole horizon."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.services = {s.id: s for s in cfg.service_nodes}
        self.classes = {c.id: c for c in cfg.classes}
        self._feasible: dict[tuple[str, str], tuple[str, ...]] = {}
        self._unit: dict[tuple[int, str, str, str], UnitCost] = {}
        self._ranked: dict[tuple[str, int, str, str], tuple[str, ...]] = {}

    def feasible_ids(self, class_id: str, service_id: str) -> tuple[str, ...]:
        key = (class_id, service_id)
        if key not in self._feasible:
            fs = feasible_set(self.cfg, self.services[service_id], self.classes[class_id])
            self._feasible[key] = fs.node_ids()
        return self._feasible[key]

    def unit(self, hour: int, class_id: str, service_id: str, node_id: str) -> UnitCost:
        key = (hour, class_id, service_id, node_id)
        if key not in self._unit:
            self._unit[key] = unit_cost(
                self.cfg, hour, self.services[service_id], self.classes[class_id], node_id
            )
        return self._unit[key]

    def ranked(self, policy_kind: str, hour: int, class_id: str, service_id: str) -> tuple[str, ...]:
        key = (policy_kind, hour, class_id, service_id)
        if key not in self._ranked:
            self._ranked[key] = _rank(self, policy_kind, hour, class_id, service_id)
        return self._ranked[key]


def _rank(env: _Env, kind: str, hour: int, class_id: str, service_id: str) -> tuple[str, ...]:
    cfg = env.cfg
    if kind == "local_only":
        return (env.services[service_id].colocated_compute,)
    feasible = env.feasible_ids(class_id, service_id)
    if kind == "nearest_region":
        # feasible sets are already ordered by (latency, id)
        return feasible
    if kind == "price_only":
        return tuple(sorted(feasible, key=lambda n: (cfg.node(n).price(hour), n)))
    if kind == "carbon_only":
        return tuple(sorted(feasible, key=lambda n: (cfg.node(n).moer(hour), n)))
    if kind == "joint":
        return tuple(
            sorted(feasible, key=lambda n: (env.unit(hour, class_id, service_id, n).normalized_objective, n))
        )
    raise ValueError(f"unknown policy kind {kind!r}")


def rank_nodes(cfg: ScenarioConfig, policy: Policy, class_id: str, service_id: str, hour: int) -> tuple[str, ...]:
    """Preference order over admissible nodes for one (class, source, hour).

    local_only ignores feasibility and always names the colocated node;
    every other kind orders the feasible set by its own key with node id
    breaking ties. Empty feasible set gives an empty ranking.
    """
    env = _Env(_with_policy_weights(cfg, policy))
    return env.ranked(policy.kind, hour, class_id, service_id)


def _with_policy_weights(cfg: ScenarioConfig, policy: Policy) -> ScenarioConfig:
    if policy.weights is None:
        return cfg
    return replace(cfg, weights=policy.weights)


def _allocate_hour(env: _Env, slices: list[WorkloadSlice], policy: Policy, hour: int) -> HourResult:
    cfg = env.cfg
    remaining = {node.id: node.capacity(hour) for node in cfg.nodes}
    records = []

    for piece in slices:
        cls = env.classes[piece.task_class]
        service = env.services[piece.service_node]
        ranked = env.ranked(policy.kind, hour, piece.task_class, piece.service_node)
        colocated = service.colocated_compute

        if piece.mass <= 0.0:
            target = ranked[0] if ranked else colocated
            uc = env.unit(hour, cls.id, service.id, target)
            records.append(
                AssignmentRecord(
                    slice=piece,
                    placements=(
                        Placement(target, 1.0, 0.0, uc.end_to_end_ms, uc, violation=False, forced=False),
                    ),
                    violation_flag=False,
                )
            )
            continue

        poured: list[tuple[str, float, bool]] = []  # node, mass, forced
        mass_left = piece.mass
        for node_id in ranked:
            if mass_left <= 0.0:
                break
            cap = remaining[node_id]
            if cap <= 0.0:
                continue
            fits = cap / cls.compute_demand if cls.compute_demand > 0 else mass_left
            take = mass_left if fits >= mass_left * (1.0 - _DUST) else fits
            remaining[node_id] -= take * cls.compute_demand
            if remaining[node_id] < 0.0:
                # dust from the near-fit snap above, not real overflow
                remaining[node_id] = 0.0
            poured.append((node_id, take, False))
            mass_left -= take

        if mass_left > 0.0:
            # every admissible node is saturated (or none exists)
            remaining[colocated] -= mass_left * cls.compute_demand
            poured.append((colocated, mass_left, True))
            mass_left = 0.0

        placements = []
        fraction_used = 0.0
        for index, (node_id, mass, forced) in enumerate(poured):
            uc = env.unit(hour, cls.id, service.id, node_id)
            if index == len(poured) - 1:
                fraction = 1.0 - fraction_used
            else:
                fraction = mass / piece.mass
                fraction_used += fraction
            placements.append(
                Placement(
                    node=node_id,
                    fraction=fraction,
                    mass=mass,
                    latency_ms=uc.end_to_end_ms,
                    cost=uc,
                    violation=forced and uc.violates_budget,
                    forced=forced,
                )
            )
        # local_only pours straight into the colocated node without a
        # feasibility filter, so a too-tight budget shows up here rather
        # than through the forced path
        placements = [
            p if (p.forced or not p.cost.violates_budget) else _flag(p) for p in placements
        ]
        records.append(
            AssignmentRecord(
                slice=piece,
                placements=tuple(placements),
                violation_flag=any(p.violation and p.mass > 0.0 for p in placements),
            )
        )

    overflow = {
        node_id: -cap for node_id, cap in sorted(remaining.items()) if cap < 0.0
    }
    return HourResult(hour=hour, records=tuple(records), overflow=overflow)


def _flag(placement: Placement) -> Placement:
    return Placement(
        node=placement.node,
        fraction=placement.fraction,
        mass=placement.mass,
        latency_ms=placement.latency_ms,
        cost=placement.cost,
        violation=True,
        forced=placement.forced,
    )


def allocate_hour(cfg: ScenarioConfig, slices: list[WorkloadSlice], policy: Policy, hour: int) -> HourResult:
    """Greedy ranked water-filling of one hour's slices against capacity."""
    env = _Env(_with_policy_weights(cfg, policy))
    return _allocate_hour(env, slices, policy, hour)


def run_horizon(cfg: ScenarioConfig, policy: Policy) -> Trace:
    """Allocate every hour of the scenario under one policy.

    Hours share no state (capacity resets each hour), so the result is
    the plain concatenation of the hourly allocations.
    """
    effective = _with_policy_weights(cfg, policy)
    env = _Env(effective)
    hours = tuple(
        _allocate_hour(env, hourly_slices(effective, hour), policy, hour)
        for hour in range(effective.horizon_hours)
    )
    return Trace(
        scenario_id=effective.scenario_id,
        policy=policy.kind,
        latency_multiplier=effective.latency_multiplier,
        hours=hours,
    )
