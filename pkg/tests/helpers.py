"""Small scenario factories shared by the test modules.

Everything builds flat (constant-series) scenarios so expected values
can be computed by hand. Defaults are chosen to be boring: one hour,
generous capacity, no masks, no RTT table, WAN inflation 1.
"""

from __future__ import annotations

from gridroute import (
    ComputeNode,
    FrictionParams,
    PolicyWeights,
    ScenarioConfig,
    ServiceNode,
    TaskClass,
)


def flat(value: float, hours: int) -> tuple[float, ...]:
    return (float(value),) * hours


def make_node(
    node_id: str,
    *,
    price: float = 0.10,
    moer: float = 300.0,
    pue: float = 1.2,
    capacity: float = 1e9,
    lat: float = 0.0,
    lon: float = 0.0,
    hours: int = 1,
) -> ComputeNode:
    return ComputeNode(
        id=node_id,
        display_name=node_id.title(),
        latitude=lat,
        longitude=lon,
        price_series=flat(price, hours),
        moer_series=flat(moer, hours),
        pue_series=flat(pue, hours),
        capacity_series=flat(capacity, hours),
    )


def make_class(
    class_id: str = "B",
    *,
    budget: float = 10_000.0,
    energy: float = 0.4,
    demand: float = 1.0,
    rounds: int = 1,
    inference: float = 0.0,
    queueing: float = 0.0,
    statefulness: str = "low",
    friction: FrictionParams | None = None,
) -> TaskClass:
    return TaskClass(
        id=class_id,
        latency_budget_ms=budget,
        energy_per_unit_kwh=energy,
        compute_demand=demand,
        rounds=rounds,
        inference_time_ms=inference,
        queueing_time_ms=queueing,
        statefulness=statefulness,
        friction=friction or FrictionParams(),
    )


def make_scenario(
    nodes: tuple[ComputeNode, ...],
    services: tuple[ServiceNode, ...],
    classes: tuple[TaskClass, ...],
    *,
    mix: dict[str, float] | None = None,
    hours: int = 1,
    units: float = 100.0,
    **overrides,
) -> ScenarioConfig:
    if mix is None:
        share = 1.0 / len(classes)
        mix = {c.id: share for c in classes}
    defaults = dict(
        scenario_id="test-scenario",
        nodes=nodes,
        service_nodes=services,
        classes=classes,
        class_mix=mix,
        horizon_hours=hours,
        units_per_hour=units,
        wan_inflation=1.0,
        weights=PolicyWeights(),
    )
    defaults.update(overrides)
    return ScenarioConfig(**defaults)


def two_region_scenario(
    *,
    home_price: float = 0.10,
    away_price: float = 0.05,
    home_moer: float = 300.0,
    away_moer: float = 100.0,
    rtt: float = 40.0,
    capacity: float = 1e9,
    hours: int = 1,
    classes: tuple[TaskClass, ...] | None = None,
    **overrides,
) -> ScenarioConfig:
    """One service at `home`, one remote region `away` at the given RTT."""
    nodes = (
        make_node("away", price=away_price, moer=away_moer, capacity=capacity, hours=hours),
        make_node("home", price=home_price, moer=home_moer, capacity=capacity, hours=hours),
    )
    services = (ServiceNode(id="svc-home", colocated_compute="home", demand_weight=1.0),)
    if classes is None:
        classes = (make_class("B"),)
    return make_scenario(
        nodes,
        services,
        classes,
        hours=hours,
        rtt_matrix={"home": {"away": rtt}},
        **overrides,
    )
