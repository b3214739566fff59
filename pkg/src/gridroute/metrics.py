"""Operational metrics computed from an assignment trace.

Everything here is pure aggregation: relocatable demand, spend and
carbon totals, violation rate, tier sorting, relocation corridors, and
the marginal-return series across a latency sweep. All mass weighting
uses placement mass, since slices are divisible aggregates rather than
individual requests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .allocator import Placement, Trace
from .latency import service_to_compute_ms
from .model import ScenarioConfig, TierThresholds

TIER_NAMES = ("local", "regional", "energy_oriented")


@dataclass(frozen=True)
class FlowShare:
    """An off-home relocation corridor and its share of all placed mass."""

    source: str
    dest: str
    share: float


@dataclass(frozen=True)
class ReturnStep:
    """Marginal saving per unit of latency-multiplier between two sweep points."""

    from_multiplier: float
    to_multiplier: float
    erl: float  # $ saved per multiplier step
    crl: float  # gCO2eq saved per multiplier step


@dataclass(frozen=True)
class TraceTotals:
    mass: float
    facility_energy_kwh: float
    electricity_cost_usd: float
    migration_cost_usd: float
    carbon_g: float


@dataclass(frozen=True)
class MetricsReport:
    """Headline metrics of one policy run, reductions taken against a
    baseline run of the same scenario (conventionally Local-Only)."""

    rid: float
    electricity_cost_usd: float
    migration_cost_usd: float
    total_cost_usd: float
    total_carbon_g: float
    cost_reduction_vs_baseline: float
    carbon_reduction_vs_baseline: float
    sla_violation_rate: float
    tier_shares: Mapping[str, Mapping[str, float]]
    migration_cost_share: float
    mean_service_to_compute_ms: float
    top_flows: tuple[FlowShare, ...]


def _iter_placements(trace: Trace) -> Iterable[tuple[object, Placement]]:
    for record in trace.records():
        for placement in record.placements:
            yield record.slice, placement


def _reference_node(cfg: ScenarioConfig, service_id: str) -> str:
    """The node a placement is compared against when counting relocation."""
    service = cfg.service(service_id)
    if cfg.rid_reference == "nearest":
        return min(
            cfg.nodes, key=lambda n: (service_to_compute_ms(cfg, service, n.id), n.id)
        ).id
    return service.colocated_compute


def rid(trace: Trace, cfg: ScenarioConfig) -> float:
    """Energy-weighted share of demand executed away from its default node."""
    moved = 0.0
    total = 0.0
    for piece, placement in _iter_placements(trace):
        energy = cfg.task_class(piece.task_class).energy_per_unit_kwh * placement.mass
        total += energy
        if placement.node != _reference_node(cfg, piece.service_node):
            moved += energy
    if total <= 0.0:
        raise ValueError("trace carries no energy; relocatable share is undefined")
    return moved / total


def reduction(policy_total: float, baseline_total: float) -> float:
    """Signed fractional saving of a policy against a baseline total."""
    if baseline_total <= 0.0:
        raise ValueError(f"baseline total must be positive, got {baseline_total!r}")
    return (baseline_total - policy_total) / baseline_total


def sla_violation_rate(trace: Trace) -> float:
    """Mass-weighted share of placed workload that broke its latency budget."""
    violating = 0.0
    total = 0.0
    for _, placement in _iter_placements(trace):
        total += placement.mass
        if placement.violation:
            violating += placement.mass
    return violating / total if total > 0.0 else 0.0


def tier_shares(trace: Trace, thresholds: TierThresholds) -> dict[str, dict[str, float]]:
    """Mass split of each class over local / regional / energy-oriented tiers.

    A placement's tier comes from its one-way service-to-compute leg,
    with boundaries inclusive. Classes without placed mass are omitted.
    """
    masses: dict[str, dict[str, float]] = {}
    for piece, placement in _iter_placements(trace):
        tiers = masses.setdefault(piece.task_class, dict.fromkeys(TIER_NAMES, 0.0))
        leg = placement.cost.service_to_compute_ms
        if leg <= thresholds.local_ms:
            tier = "local"
        elif leg <= thresholds.regional_ms:
            tier = "regional"
        else:
            tier = "energy_oriented"
        tiers[tier] += placement.mass
    shares = {}
    for class_id, tiers in sorted(masses.items()):
        total = sum(tiers.values())
        if total <= 0.0:
            continue
        shares[class_id] = {name: tiers[name] / total for name in TIER_NAMES}
    return shares


def totals(trace: Trace) -> TraceTotals:
    """Spend, energy, and carbon sums over every placement of a trace."""
    mass = energy = cost = migration = carbon = 0.0
    for _, placement in _iter_placements(trace):
        m = placement.mass
        mass += m
        energy += placement.cost.facility_energy_kwh * m
        cost += placement.cost.energy_cost * m
        migration += placement.cost.migration_cost * m
        carbon += placement.cost.carbon_g * m
    return TraceTotals(
        mass=mass,
        facility_energy_kwh=energy,
        electricity_cost_usd=cost,
        migration_cost_usd=migration,
        carbon_g=carbon,
    )


def erl_crl(points: Sequence[tuple[float, float, float]]) -> list[ReturnStep]:
    """Finite-difference returns on latency from (multiplier, cost, carbon) points.

    Positive values mean relaxing the budget saved money or carbon over
    that step. Duplicate multipliers are rejected; points may arrive in
    any order and are sorted first.
    """
    if len(points) < 2:
        raise ValueError("need at least two sweep points for marginal returns")
    ordered = sorted(points, key=lambda p: p[0])
    for (m1, _, _), (m2, _, _) in zip(ordered, ordered[1:]):
        if m1 == m2:
            raise ValueError(f"duplicate latency multiplier {m1!r} in sweep points")
    steps = []
    for (m1, cost1, carbon1), (m2, cost2, carbon2) in zip(ordered, ordered[1:]):
        width = m2 - m1
        steps.append(
            ReturnStep(
                from_multiplier=m1,
                to_multiplier=m2,
                erl=(cost1 - cost2) / width,
                crl=(carbon1 - carbon2) / width,
            )
        )
    return steps


def top_flows(trace: Trace, cfg: ScenarioConfig, n: int = 10) -> tuple[FlowShare, ...]:
    """Largest off-home relocation corridors by share of total placed mass."""
    if n < 1:
        raise ValueError("n must be at least 1")
    total = 0.0
    corridors: dict[tuple[str, str], float] = {}
    for piece, placement in _iter_placements(trace):
        total += placement.mass
        source = cfg.service(piece.service_node).colocated_compute
        if placement.node != source and placement.mass > 0.0:
            key = (source, placement.node)
            corridors[key] = corridors.get(key, 0.0) + placement.mass
    if total <= 0.0:
        return ()
    ranked = sorted(corridors.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(
        FlowShare(source=src, dest=dst, share=mass / total) for (src, dst), mass in ranked[:n]
    )


def migration_cost_share(trace_totals: TraceTotals) -> float:
    """Friction spend as a fraction of all simulated spending."""
    spend = trace_totals.electricity_cost_usd + trace_totals.migration_cost_usd
    return trace_totals.migration_cost_usd / spend if spend > 0.0 else 0.0


def mean_service_to_compute_ms(trace: Trace) -> float:
    """Mass-weighted average one-way network leg of all placements."""
    weighted = 0.0
    mass = 0.0
    for _, placement in _iter_placements(trace):
        weighted += placement.cost.service_to_compute_ms * placement.mass
        mass += placement.mass
    return weighted / mass if mass > 0.0 else 0.0


def build_report(
    trace: Trace,
    cfg: ScenarioConfig,
    baseline: TraceTotals,
    top_n: int = 10,
) -> MetricsReport:
    """Assemble the full metrics report for one run.

    Cost and carbon reductions compare electricity spend and operational
    carbon against the baseline run; migration friction is reported
    separately and inside the total spend.
    """
    own = totals(trace)
    return MetricsReport(
        rid=rid(trace, cfg),
        electricity_cost_usd=own.electricity_cost_usd,
        migration_cost_usd=own.migration_cost_usd,
        total_cost_usd=own.electricity_cost_usd + own.migration_cost_usd,
        total_carbon_g=own.carbon_g,
        cost_reduction_vs_baseline=reduction(own.electricity_cost_usd, baseline.electricity_cost_usd),
        carbon_reduction_vs_baseline=reduction(own.carbon_g, baseline.carbon_g),
        sla_violation_rate=sla_violation_rate(trace),
        tier_shares=tier_shares(trace, cfg.tier_thresholds),
        migration_cost_share=migration_cost_share(own),
        mean_service_to_compute_ms=mean_service_to_compute_ms(trace),
        top_flows=top_flows(trace, cfg, top_n),
    )
