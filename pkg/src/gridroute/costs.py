"""Per-unit placement costs and the weighted placement objective.

Every candidate placement of one demand unit gets a cost breakdown:
facility energy, electricity spend, carbon mass, a latency penalty, and
the one-off friction of moving the work away from its home region. The
raw objective is the weighted sum of the money/carbon/delay/friction
terms; the normalized objective rescales each term against the
colocated placement so equal weights compare like with like.
"""

from __future__ import annotations

from dataclasses import dataclass

from .latency import end_to_end_ms, service_to_compute_ms
from .model import ScenarioConfig, ServiceNode, TaskClass, effective_budget


class DegenerateNormalizerError(ValueError):
    """Colocated energy or carbon cost is zero, so ratios are undefined."""


@dataclass(frozen=True)
class UnitCost:
    """Cost components for one demand unit of a class placed on a node.

    Migration components are reported separately; their sum is
    ``migration_cost``. ``raw_objective`` recomposes exactly as
    alpha*energy_cost + beta*carbon_g + gamma*delay_penalty +
    eta*migration_cost.
    """

    node: str
    facility_energy_kwh: float
    energy_cost: float           # $
    carbon_g: float              # gCO2eq
    delay_penalty: float         # ms
    migration_state: float       # $
    migration_cache: float       # $
    migration_egress: float      # $
    migration_replica: float     # $
    migration_cost: float        # $
    raw_objective: float
    normalized_objective: float
    end_to_end_ms: float
    service_to_compute_ms: float
    violates_budget: bool


def facility_energy(energy_kwh: float, pue: float) -> float:
    """Facility-level electricity demand for one unit (kWh)."""
    return energy_kwh * pue


def energy_cost(energy_kwh: float, pue: float, price: float) -> float:
    """Electricity spend for one unit ($)."""
    return energy_kwh * pue * price


def carbon_cost(energy_kwh: float, pue: float, moer: float) -> float:
    """Operational carbon for one unit (gCO2eq)."""
    return energy_kwh * pue * moer


def delay_penalty(latency_ms: float, budget_ms: float, leg_ms: float, mode: str) -> float:
    """Latency penalty: budget excess, or the geographic leg itself."""
    if mode == "excess":
        return max(0.0, latency_ms - budget_ms)
    return leg_ms


def migration_components(
    cfg: ScenarioConfig, service: ServiceNode, task_class: TaskClass, node_id: str
) -> tuple[float, float, float, float]:
    """Per-unit (state, cache, egress, replica) friction of off-home execution ($).

    All four are zero on the colocated node. State and cache scale with
    the class statefulness factor; egress is priced per GB on the
    specific region pair when a price matrix is configured.
    """
    src = service.colocated_compute
    if src == node_id:
        return (0.0, 0.0, 0.0, 0.0)
    fr = task_class.friction
    stateful = cfg.statefulness_factor(task_class.statefulness)
    egress_price = cfg.egress_price(src, node_id, fr.egress_price_per_gb)
    return (
        stateful * fr.state_cost_per_unit,
        stateful * fr.cache_cost_per_unit,
        fr.egress_gb_per_unit * egress_price,
        fr.replica_cost_per_unit,
    )


def migration_cost_per_unit(cfg: ScenarioConfig, service: ServiceNode, task_class: TaskClass, node_id: str) -> float:
    """Total friction of serving one unit away from the colocated region ($)."""
    return sum(migration_components(cfg, service, task_class, node_id))


def unit_cost(cfg: ScenarioConfig, hour: int, service: ServiceNode, task_class: TaskClass, node_id: str) -> UnitCost:
    """Full cost breakdown for one unit of the class on the given node.

    Raises DegenerateNormalizerError when the colocated node has zero
    electricity cost or zero carbon at this hour, since the normalized
    objective divides by both.
    """
    node = cfg.node(node_id)
    local = cfg.node(service.colocated_compute)
    w = cfg.weights

    fac = facility_energy(task_class.energy_per_unit_kwh, node.pue(hour))
    e_cost = fac * node.price(hour)
    carbon = fac * node.moer(hour)

    latency = end_to_end_ms(cfg, service, task_class, node_id)
    leg = service_to_compute_ms(cfg, service, node_id)
    budget = effective_budget(task_class, cfg.latency_multiplier)
    delay = delay_penalty(latency, budget, leg, cfg.delay_penalty_mode)

    m_state, m_cache, m_egress, m_replica = migration_components(cfg, service, task_class, node_id)
    migration = m_state + m_cache + m_egress + m_replica

    raw = w.alpha * e_cost + w.beta * carbon + w.gamma * delay + w.eta * migration

    local_energy = energy_cost(task_class.energy_per_unit_kwh, local.pue(hour), local.price(hour))
    local_carbon = carbon_cost(task_class.energy_per_unit_kwh, local.pue(hour), local.moer(hour))
    if local_energy <= 0.0 or local_carbon <= 0.0:
        raise DegenerateNormalizerError(
            f"colocated node {local.id!r} has zero energy or carbon cost at hour {hour}; "
            f"normalized objective is undefined"
        )
    normalized = (
        w.alpha * (e_cost / local_energy)
        + w.beta * (carbon / local_carbon)
        + w.gamma * (delay / budget)
        + w.eta * (migration / local_energy)
    )

    return UnitCost(
        node=node_id,
        facility_energy_kwh=fac,
        energy_cost=e_cost,
        carbon_g=carbon,
        delay_penalty=delay,
        migration_state=m_state,
        migration_cache=m_cache,
        migration_egress=m_egress,
        migration_replica=m_replica,
        migration_cost=migration,
        raw_objective=raw,
        normalized_objective=normalized,
        end_to_end_ms=latency,
        service_to_compute_ms=leg,
        violates_budget=latency > budget,
    )


def local_unit_cost(cfg: ScenarioConfig, hour: int, service: ServiceNode, task_class: TaskClass) -> UnitCost:
    """Cost breakdown for the colocated (home region) placement."""
    return unit_cost(cfg, hour, service, task_class, service.colocated_compute)


def net_benefit(cfg: ScenarioConfig, hour: int, service: ServiceNode, task_class: TaskClass, node_id: str) -> float:
    """Normalized-objective gain of a node over staying colocated.

    Positive means the remote placement wins after friction.
    """
    here = unit_cost(cfg, hour, service, task_class, node_id)
    home = local_unit_cost(cfg, hour, service, task_class)
    return home.normalized_objective - here.normalized_objective
