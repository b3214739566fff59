"""Domain types for the placement simulator.

Everything here is plain value data: compute regions with hourly energy
attributes, service ingress points, workload classes, and the scenario
container that ties them together. Instances are treated as immutable
after validation and can be shared freely across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

CLASS_IDS = ("A", "B", "C", "D")
STATEFULNESS_LEVELS = ("low", "medium", "high")
DELAY_PENALTY_MODES = ("excess", "geographic")
RID_REFERENCES = ("colocated", "nearest")

# Mass/capacity comparisons ignore float dust below this.
EPSILON = 1e-12


class ScenarioError(Exception):
    """Base class for scenario loading and validation failures."""


class ValidationFailure(ScenarioError):
    """Raised when a scenario fails invariant validation."""

    def __init__(self, findings: list[str]):
        self.findings = findings
        super().__init__("scenario validation failed:\n" + "\n".join(f"  - {f}" for f in findings))


@dataclass(frozen=True)
class ComputeNode:
    """A compute region with hourly price, emissions, PUE, and capacity series."""

    id: str
    display_name: str
    latitude: float
    longitude: float
    price_series: tuple[float, ...]      # $/kWh per hour
    moer_series: tuple[float, ...]       # gCO2eq/kWh per hour
    pue_series: tuple[float, ...]        # dimensionless >= 1
    capacity_series: tuple[float, ...]   # compute-units per hour

    def price(self, hour: int) -> float:
        return self.price_series[hour]

    def moer(self, hour: int) -> float:
        return self.moer_series[hour]

    def pue(self, hour: int) -> float:
        return self.pue_series[hour]

    def capacity(self, hour: int) -> float:
        return self.capacity_series[hour]


@dataclass(frozen=True)
class ServiceNode:
    """User-facing ingress point, colocated with one compute region."""

    id: str
    colocated_compute: str
    client_latency_ms: float = 10.0
    demand_weight: float = 0.0


@dataclass(frozen=True)
class FrictionParams:
    """Per-unit cost components of moving work away from its home region.

    State and cache components are additionally scaled by the class
    statefulness factor; egress is priced per GB moved between regions;
    replica covers model/data replication. All components are zero for a
    placement on the source's colocated node.
    """

    state_cost_per_unit: float = 0.0     # $/unit
    cache_cost_per_unit: float = 0.0     # $/unit
    egress_gb_per_unit: float = 0.0      # GB/unit
    egress_price_per_gb: float = 0.0     # $/GB scalar default; matrix may override
    replica_cost_per_unit: float = 0.0   # $/unit


@dataclass(frozen=True)
class TaskClass:
    """A workload archetype: latency budget, demand magnitudes, friction."""

    id: str
    latency_budget_ms: float
    energy_per_unit_kwh: float
    compute_demand: float
    rounds: int = 1
    inference_time_ms: float = 0.0
    queueing_time_ms: float = 0.0
    statefulness: str = "low"
    friction: FrictionParams = field(default_factory=FrictionParams)


@dataclass(frozen=True)
class PolicyWeights:
    """Non-negative weights for the energy / carbon / delay / friction terms."""

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    eta: float = 1.0


@dataclass(frozen=True)
class WorkloadSlice:
    """Divisible demand mass for one (hour, service node, class) cell."""

    hour: int
    service_node: str
    task_class: str
    mass: float


@dataclass(frozen=True)
class TierThresholds:
    """One-way service-to-compute latency cut points for the placement tiers."""

    local_ms: float = 15.0
    regional_ms: float = 80.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete deterministic experiment input.

    Series are aligned arrays of length ``horizon_hours``. Masks map
    class id -> node id -> bool and default to all-true. ``rtt_matrix``
    holds ordered region-pair round-trip times in ms; pairs missing from
    it fall back to the distance formula.
    """

    scenario_id: str
    nodes: tuple[ComputeNode, ...]
    service_nodes: tuple[ServiceNode, ...]
    classes: tuple[TaskClass, ...]
    class_mix: Mapping[str, float]
    horizon_hours: int
    units_per_hour: float = 100.0
    rtt_matrix: Mapping[str, Mapping[str, float]] = field(default_factory=dict)
    egress_price_matrix: Mapping[str, Mapping[str, float]] | None = None
    wan_inflation: float = 1.0
    fallback_speed_km_per_ms: float = 200.0
    fallback_overhead_ms: float = 20.0
    intra_region_floor_ms: float = 1.0
    rounds_are_round_trips: bool = False
    latency_multiplier: float = 1.0
    weights: PolicyWeights = field(default_factory=PolicyWeights)
    delay_penalty_mode: str = "geographic"
    legal_mask: Mapping[str, Mapping[str, bool]] | None = None
    system_mask: Mapping[str, Mapping[str, bool]] | None = None
    statefulness_factors: Mapping[str, float] = field(
        default_factory=lambda: {"low": 0.0, "medium": 0.5, "high": 1.0}
    )
    tier_thresholds: TierThresholds = field(default_factory=TierThresholds)
    rid_reference: str = "colocated"
    provenance: str = "synthetic"

    # -- lookups -------------------------------------------------------

    def node(self, node_id: str) -> ComputeNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(f"unknown compute node {node_id!r}")

    def service(self, service_id: str) -> ServiceNode:
        for s in self.service_nodes:
            if s.id == service_id:
                return s
        raise KeyError(f"unknown service node {service_id!r}")

    def task_class(self, class_id: str) -> TaskClass:
        for c in self.classes:
            if c.id == class_id:
                return c
        raise KeyError(f"unknown task class {class_id!r}")

    def mask_allows(self, class_id: str, node_id: str) -> bool:
        for mask in (self.legal_mask, self.system_mask):
            if mask is not None and not mask.get(class_id, {}).get(node_id, True):
                return False
        return True

    def rtt_ms(self, from_region: str, to_region: str) -> float | None:
        row = self.rtt_matrix.get(from_region)
        if row is None:
            return None
        return row.get(to_region)

    def egress_price(self, from_region: str, to_region: str, default: float) -> float:
        if self.egress_price_matrix is not None:
            row = self.egress_price_matrix.get(from_region)
            if row is not None and to_region in row:
                return row[to_region]
        return default

    def statefulness_factor(self, level: str) -> float:
        return self.statefulness_factors[level]

    def with_multiplier(self, multiplier: float) -> "ScenarioConfig":
        return replace(self, latency_multiplier=multiplier)


def effective_budget(task_class: TaskClass, latency_multiplier: float) -> float:
    """Latency budget after applying the system-wide multiplier (ms)."""
    if latency_multiplier <= 0:
        raise ValueError("latency multiplier must be positive")
    return task_class.latency_budget_ms * latency_multiplier


def hourly_slices(cfg: ScenarioConfig, hour: int) -> list[WorkloadSlice]:
    """Demand slices for one hour: units split by service weight and class mix.

    Processing order is class A->D, then service node id; the allocator
    relies on this order for reproducible contention resolution.
    """
    total_weight = sum(s.demand_weight for s in cfg.service_nodes)
    slices = []
    for cls in sorted(cfg.classes, key=lambda c: c.id):
        mix = cfg.class_mix.get(cls.id, 0.0)
        for svc in sorted(cfg.service_nodes, key=lambda s: s.id):
            mass = cfg.units_per_hour * (svc.demand_weight / total_weight) * mix
            slices.append(WorkloadSlice(hour=hour, service_node=svc.id, task_class=cls.id, mass=mass))
    return slices


# ----------------------------------------------------------------------
# Validation
# ----------------------------------------------------------------------

def validate_scenario(cfg: ScenarioConfig) -> list[str]:
    """Check every type invariant; returns findings (empty means valid).

    Findings are data, not exceptions: each one names the violated
    invariant and the offending entity.
    """
    findings: list[str] = []
    t = cfg.horizon_hours

    if t <= 0:
        findings.append("horizon_hours must be positive")
    if cfg.units_per_hour < 0:
        findings.append("units_per_hour must be non-negative")
    if cfg.wan_inflation < 1.0:
        findings.append(f"wan_inflation {cfg.wan_inflation} below 1")
    if cfg.fallback_speed_km_per_ms <= 0:
        findings.append("fallback_speed_km_per_ms must be positive")
    if cfg.fallback_overhead_ms < 0:
        findings.append("fallback_overhead_ms must be non-negative")
    if cfg.intra_region_floor_ms < 0:
        findings.append("intra_region_floor_ms must be non-negative")
    if cfg.latency_multiplier <= 0:
        findings.append("latency_multiplier must be positive")
    if cfg.delay_penalty_mode not in DELAY_PENALTY_MODES:
        findings.append(f"delay_penalty_mode {cfg.delay_penalty_mode!r} not one of {DELAY_PENALTY_MODES}")
    if cfg.rid_reference not in RID_REFERENCES:
        findings.append(f"rid_reference {cfg.rid_reference!r} not one of {RID_REFERENCES}")

    node_ids = [n.id for n in cfg.nodes]
    if len(set(node_ids)) != len(node_ids):
        findings.append("duplicate compute node ids")
    if not cfg.nodes:
        findings.append("scenario has no compute nodes")

    for n in cfg.nodes:
        for name, series in (
            ("price_series", n.price_series),
            ("moer_series", n.moer_series),
            ("pue_series", n.pue_series),
            ("capacity_series", n.capacity_series),
        ):
            if len(series) != t:
                findings.append(f"node {n.id}: {name} length {len(series)} != horizon {t}")
        if any(v < 1.0 for v in n.pue_series):
            findings.append(f"node {n.id}: pue below 1")
        for name, series in (
            ("price_series", n.price_series),
            ("moer_series", n.moer_series),
            ("capacity_series", n.capacity_series),
        ):
            if any(v < 0 for v in series):
                findings.append(f"node {n.id}: {name} has negative values")
        if not -90.0 <= n.latitude <= 90.0:
            findings.append(f"node {n.id}: latitude {n.latitude} out of range")
        if not -180.0 <= n.longitude <= 180.0:
            findings.append(f"node {n.id}: longitude {n.longitude} out of range")

    service_ids = [s.id for s in cfg.service_nodes]
    if len(set(service_ids)) != len(service_ids):
        findings.append("duplicate service node ids")
    if not cfg.service_nodes:
        findings.append("scenario has no service nodes")

    known_nodes = set(node_ids)
    min_client_latency = min((s.client_latency_ms for s in cfg.service_nodes), default=0.0)
    weight_sum = 0.0
    for s in cfg.service_nodes:
        if s.colocated_compute not in known_nodes:
            findings.append(f"service node {s.id}: colocated compute {s.colocated_compute!r} unknown")
        if s.demand_weight < 0:
            findings.append(f"service node {s.id}: negative demand weight")
        if s.client_latency_ms < 0:
            findings.append(f"service node {s.id}: negative client latency")
        weight_sum += s.demand_weight
    if cfg.service_nodes and weight_sum <= 0:
        findings.append("service node demand weights sum to zero")

    class_ids = [c.id for c in cfg.classes]
    if len(set(class_ids)) != len(class_ids):
        findings.append("duplicate task class ids")
    for c in cfg.classes:
        if c.id not in CLASS_IDS:
            findings.append(f"task class {c.id!r} not one of {CLASS_IDS}")
        if c.rounds < 1:
            findings.append(f"task class {c.id}: rounds {c.rounds} below 1")
        for name, v in (
            ("latency_budget_ms", c.latency_budget_ms),
            ("energy_per_unit_kwh", c.energy_per_unit_kwh),
            ("compute_demand", c.compute_demand),
            ("inference_time_ms", c.inference_time_ms),
            ("queueing_time_ms", c.queueing_time_ms),
        ):
            if v < 0:
                findings.append(f"task class {c.id}: {name} negative")
        if c.statefulness not in STATEFULNESS_LEVELS:
            findings.append(f"task class {c.id}: statefulness {c.statefulness!r} invalid")
        elif c.statefulness not in cfg.statefulness_factors:
            findings.append(f"task class {c.id}: no statefulness factor for {c.statefulness!r}")
        fr = c.friction
        for name, v in (
            ("state_cost_per_unit", fr.state_cost_per_unit),
            ("cache_cost_per_unit", fr.cache_cost_per_unit),
            ("egress_gb_per_unit", fr.egress_gb_per_unit),
            ("egress_price_per_gb", fr.egress_price_per_gb),
            ("replica_cost_per_unit", fr.replica_cost_per_unit),
        ):
            if v < 0:
                findings.append(f"task class {c.id}: friction {name} negative")
        # A class whose budget cannot even cover local execution is never
        # placeable anywhere; reject rather than simulate guaranteed failure.
        if cfg.service_nodes and c.latency_budget_ms <= (
            c.inference_time_ms + c.queueing_time_ms + min_client_latency
        ):
            findings.append(
                f"task class {c.id}: latency budget {c.latency_budget_ms} ms cannot cover "
                f"inference + queueing + minimum client latency"
            )

    mix_sum = sum(cfg.class_mix.get(cid, 0.0) for cid in class_ids)
    if abs(mix_sum - 1.0) > 1e-6:
        findings.append(f"class mix not normalized (sums to {mix_sum:.6g})")
    for cid, frac in cfg.class_mix.items():
        if cid not in set(class_ids):
            findings.append(f"class mix references unknown class {cid!r}")
        if frac < 0:
            findings.append(f"class mix fraction for {cid} negative")

    for src, row in cfg.rtt_matrix.items():
        if src not in known_nodes:
            findings.append(f"rtt matrix references unknown region {src!r}")
            continue
        for dst, rtt in row.items():
            if dst not in known_nodes:
                findings.append(f"rtt matrix references unknown region {dst!r}")
            elif rtt < 0:
                findings.append(f"rtt matrix entry {src}->{dst} negative")

    for label, mask in (("legal_mask", cfg.legal_mask), ("system_mask", cfg.system_mask)):
        if mask is None:
            continue
        for cid, row in mask.items():
            if cid not in set(class_ids):
                findings.append(f"{label} references unknown class {cid!r}")
            for nid in row:
                if nid not in known_nodes:
                    findings.append(f"{label} references unknown node {nid!r}")

    th = cfg.tier_thresholds
    if not th.local_ms < th.regional_ms:
        findings.append(f"tier thresholds local {th.local_ms} must be below regional {th.regional_ms}")
    if cfg.intra_region_floor_ms > th.local_ms:
        findings.append(
            f"intra-region floor {cfg.intra_region_floor_ms} ms exceeds local tier "
            f"threshold {th.local_ms} ms; a colocated placement must classify as local"
        )

    return findings


def require_valid(cfg: ScenarioConfig) -> ScenarioConfig:
    """Validate and return the scenario, raising ValidationFailure on findings."""
    findings = validate_scenario(cfg)
    if findings:
        raise ValidationFailure(findings)
    return cfg
