"""Scenario file loading and saving.

The on-disk format is a single JSON document mirroring the scenario
dataclasses field for field: series are arrays of horizon length, the
RTT matrix is a nested region map, masks are nested boolean maps (null
meaning all-true), and omitted optional fields take the documented
defaults. Unknown keys are errors rather than warnings so typos cannot
silently change an experiment.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Mapping

from .model import (
    ComputeNode,
    FrictionParams,
    PolicyWeights,
    ScenarioConfig,
    ScenarioError,
    ServiceNode,
    TaskClass,
    TierThresholds,
    require_valid,
)

_NODE_KEYS = {
    "id", "display_name", "latitude", "longitude",
    "price_series", "moer_series", "pue_series", "capacity_series",
}
_SERVICE_KEYS = {"id", "colocated_compute", "client_latency_ms", "demand_weight"}
_FRICTION_KEYS = {
    "state_cost_per_unit", "cache_cost_per_unit", "egress_gb_per_unit",
    "egress_price_per_gb", "replica_cost_per_unit",
}
_CLASS_KEYS = {
    "id", "latency_budget_ms", "energy_per_unit_kwh", "compute_demand", "rounds",
    "inference_time_ms", "queueing_time_ms", "statefulness", "friction",
}
_WEIGHT_KEYS = {"alpha", "beta", "gamma", "eta"}
_THRESHOLD_KEYS = {"local_ms", "regional_ms"}
_TOP_KEYS = {
    "scenario_id", "nodes", "service_nodes", "classes", "class_mix",
    "horizon_hours", "units_per_hour", "rtt_matrix", "egress_price_matrix",
    "wan_inflation", "fallback_speed_km_per_ms", "fallback_overhead_ms",
    "intra_region_floor_ms", "rounds_are_round_trips", "latency_multiplier",
    "weights", "delay_penalty_mode", "legal_mask", "system_mask",
    "statefulness_factors", "tier_thresholds", "rid_reference", "provenance",
}


def _check_keys(data: Mapping[str, Any], allowed: set[str], context: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ScenarioError(f"{context}: unknown key(s) {', '.join(repr(k) for k in unknown)}")


def _num(value: Any, context: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{context}: expected a number, got {value!r}")
    return float(value)


def _series(value: Any, context: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise ScenarioError(f"{context}: expected an array")
    return tuple(_num(v, context) for v in value)


def _node_from(data: Mapping[str, Any]) -> ComputeNode:
    context = f"node {data.get('id', '?')!r}"
    _check_keys(data, _NODE_KEYS, context)
    return ComputeNode(
        id=data["id"],
        display_name=data.get("display_name", data["id"]),
        latitude=_num(data["latitude"], context),
        longitude=_num(data["longitude"], context),
        price_series=_series(data["price_series"], f"{context} price_series"),
        moer_series=_series(data["moer_series"], f"{context} moer_series"),
        pue_series=_series(data["pue_series"], f"{context} pue_series"),
        capacity_series=_series(data["capacity_series"], f"{context} capacity_series"),
    )


def _service_from(data: Mapping[str, Any]) -> ServiceNode:
    context = f"service node {data.get('id', '?')!r}"
    _check_keys(data, _SERVICE_KEYS, context)
    return ServiceNode(
        id=data["id"],
        colocated_compute=data["colocated_compute"],
        client_latency_ms=_num(data.get("client_latency_ms", 10.0), context),
        demand_weight=_num(data.get("demand_weight", 0.0), context),
    )


def _friction_from(data: Mapping[str, Any], context: str) -> FrictionParams:
    _check_keys(data, _FRICTION_KEYS, context)
    return FrictionParams(
        state_cost_per_unit=_num(data.get("state_cost_per_unit", 0.0), context),
        cache_cost_per_unit=_num(data.get("cache_cost_per_unit", 0.0), context),
        egress_gb_per_unit=_num(data.get("egress_gb_per_unit", 0.0), context),
        egress_price_per_gb=_num(data.get("egress_price_per_gb", 0.0), context),
        replica_cost_per_unit=_num(data.get("replica_cost_per_unit", 0.0), context),
    )


def _class_from(data: Mapping[str, Any]) -> TaskClass:
    context = f"task class {data.get('id', '?')!r}"
    _check_keys(data, _CLASS_KEYS, context)
    return TaskClass(
        id=data["id"],
        latency_budget_ms=_num(data["latency_budget_ms"], context),
        energy_per_unit_kwh=_num(data["energy_per_unit_kwh"], context),
        compute_demand=_num(data["compute_demand"], context),
        rounds=int(data.get("rounds", 1)),
        inference_time_ms=_num(data.get("inference_time_ms", 0.0), context),
        queueing_time_ms=_num(data.get("queueing_time_ms", 0.0), context),
        statefulness=data.get("statefulness", "low"),
        friction=_friction_from(data.get("friction", {}), f"{context} friction"),
    )


def _mask_from(data: Any, context: str) -> dict[str, dict[str, bool]] | None:
    if data is None:
        return None
    if not isinstance(data, dict):
        raise ScenarioError(f"{context}: expected an object or null")
    mask = {}
    for class_id, row in data.items():
        if not isinstance(row, dict):
            raise ScenarioError(f"{context}[{class_id!r}]: expected an object")
        mask[class_id] = {node: bool(flag) for node, flag in row.items()}
    return mask


def _matrix_from(data: Any, context: str) -> dict[str, dict[str, float]]:
    if not isinstance(data, dict):
        raise ScenarioError(f"{context}: expected an object")
    return {
        src: {dst: _num(v, f"{context}[{src!r}][{dst!r}]") for dst, v in row.items()}
        for src, row in data.items()
    }


def from_dict(data: Mapping[str, Any]) -> ScenarioConfig:
    """Build an (unvalidated) scenario from parsed JSON, strictly."""
    _check_keys(data, _TOP_KEYS, "scenario")
    for required in ("scenario_id", "nodes", "service_nodes", "classes", "class_mix", "horizon_hours"):
        if required not in data:
            raise ScenarioError(f"scenario: missing required key {required!r}")

    weights_data = data.get("weights", {})
    _check_keys(weights_data, _WEIGHT_KEYS, "weights")
    thresholds_data = data.get("tier_thresholds", {})
    _check_keys(thresholds_data, _THRESHOLD_KEYS, "tier_thresholds")

    egress = data.get("egress_price_matrix")
    return ScenarioConfig(
        scenario_id=data["scenario_id"],
        nodes=tuple(_node_from(n) for n in data["nodes"]),
        service_nodes=tuple(_service_from(s) for s in data["service_nodes"]),
        classes=tuple(_class_from(c) for c in data["classes"]),
        class_mix={k: _num(v, "class_mix") for k, v in data["class_mix"].items()},
        horizon_hours=int(data["horizon_hours"]),
        units_per_hour=_num(data.get("units_per_hour", 100.0), "units_per_hour"),
        rtt_matrix=_matrix_from(data.get("rtt_matrix", {}), "rtt_matrix"),
        egress_price_matrix=None if egress is None else _matrix_from(egress, "egress_price_matrix"),
        wan_inflation=_num(data.get("wan_inflation", 1.0), "wan_inflation"),
        fallback_speed_km_per_ms=_num(data.get("fallback_speed_km_per_ms", 200.0), "fallback_speed_km_per_ms"),
        fallback_overhead_ms=_num(data.get("fallback_overhead_ms", 20.0), "fallback_overhead_ms"),
        intra_region_floor_ms=_num(data.get("intra_region_floor_ms", 1.0), "intra_region_floor_ms"),
        rounds_are_round_trips=bool(data.get("rounds_are_round_trips", False)),
        latency_multiplier=_num(data.get("latency_multiplier", 1.0), "latency_multiplier"),
        weights=PolicyWeights(
            alpha=_num(weights_data.get("alpha", 1.0), "weights.alpha"),
            beta=_num(weights_data.get("beta", 1.0), "weights.beta"),
            gamma=_num(weights_data.get("gamma", 1.0), "weights.gamma"),
            eta=_num(weights_data.get("eta", 1.0), "weights.eta"),
        ),
        delay_penalty_mode=data.get("delay_penalty_mode", "geographic"),
        legal_mask=_mask_from(data.get("legal_mask"), "legal_mask"),
        system_mask=_mask_from(data.get("system_mask"), "system_mask"),
        statefulness_factors={
            k: _num(v, "statefulness_factors")
            for k, v in data.get("statefulness_factors", {"low": 0.0, "medium": 0.5, "high": 1.0}).items()
        },
        tier_thresholds=TierThresholds(
            local_ms=_num(thresholds_data.get("local_ms", 15.0), "tier_thresholds.local_ms"),
            regional_ms=_num(thresholds_data.get("regional_ms", 80.0), "tier_thresholds.regional_ms"),
        ),
        rid_reference=data.get("rid_reference", "colocated"),
        provenance=data.get("provenance", "synthetic"),
    )


def to_dict(cfg: ScenarioConfig) -> dict[str, Any]:
    """Plain-JSON form of a scenario, in fixed key order."""
    return {
        "scenario_id": cfg.scenario_id,
        "horizon_hours": cfg.horizon_hours,
        "units_per_hour": cfg.units_per_hour,
        "provenance": cfg.provenance,
        "latency_multiplier": cfg.latency_multiplier,
        "wan_inflation": cfg.wan_inflation,
        "fallback_speed_km_per_ms": cfg.fallback_speed_km_per_ms,
        "fallback_overhead_ms": cfg.fallback_overhead_ms,
        "intra_region_floor_ms": cfg.intra_region_floor_ms,
        "rounds_are_round_trips": cfg.rounds_are_round_trips,
        "delay_penalty_mode": cfg.delay_penalty_mode,
        "rid_reference": cfg.rid_reference,
        "weights": {
            "alpha": cfg.weights.alpha,
            "beta": cfg.weights.beta,
            "gamma": cfg.weights.gamma,
            "eta": cfg.weights.eta,
        },
        "tier_thresholds": {
            "local_ms": cfg.tier_thresholds.local_ms,
            "regional_ms": cfg.tier_thresholds.regional_ms,
        },
        "statefulness_factors": dict(cfg.statefulness_factors),
        "class_mix": dict(cfg.class_mix),
        "classes": [
            {
                "id": c.id,
                "latency_budget_ms": c.latency_budget_ms,
                "energy_per_unit_kwh": c.energy_per_unit_kwh,
                "compute_demand": c.compute_demand,
                "rounds": c.rounds,
                "inference_time_ms": c.inference_time_ms,
                "queueing_time_ms": c.queueing_time_ms,
                "statefulness": c.statefulness,
                "friction": {
                    "state_cost_per_unit": c.friction.state_cost_per_unit,
                    "cache_cost_per_unit": c.friction.cache_cost_per_unit,
                    "egress_gb_per_unit": c.friction.egress_gb_per_unit,
                    "egress_price_per_gb": c.friction.egress_price_per_gb,
                    "replica_cost_per_unit": c.friction.replica_cost_per_unit,
                },
            }
            for c in cfg.classes
        ],
        "nodes": [
            {
                "id": n.id,
                "display_name": n.display_name,
                "latitude": n.latitude,
                "longitude": n.longitude,
                "price_series": list(n.price_series),
                "moer_series": list(n.moer_series),
                "pue_series": list(n.pue_series),
                "capacity_series": list(n.capacity_series),
            }
            for n in cfg.nodes
        ],
        "service_nodes": [
            {
                "id": s.id,
                "colocated_compute": s.colocated_compute,
                "client_latency_ms": s.client_latency_ms,
                "demand_weight": s.demand_weight,
            }
            for s in cfg.service_nodes
        ],
        "rtt_matrix": {src: dict(row) for src, row in cfg.rtt_matrix.items()},
        "egress_price_matrix": (
            None if cfg.egress_price_matrix is None
            else {src: dict(row) for src, row in cfg.egress_price_matrix.items()}
        ),
        "legal_mask": None if cfg.legal_mask is None else {k: dict(v) for k, v in cfg.legal_mask.items()},
        "system_mask": None if cfg.system_mask is None else {k: dict(v) for k, v in cfg.system_mask.items()},
    }


def loads_scenario(text: str, source: str = "<string>") -> ScenarioConfig:
    """Parse and validate a scenario document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioError(f"{source}: invalid JSON at line {err.lineno} column {err.colno}: {err.msg}") from err
    if not isinstance(data, dict):
        raise ScenarioError(f"{source}: scenario document must be a JSON object")
    return require_valid(from_dict(data))


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    return loads_scenario(path.read_text(encoding="utf-8"), source=str(path))


def dumps_scenario(cfg: ScenarioConfig) -> str:
    return json.dumps(to_dict(cfg), indent=2) + "\n"


def dump_scenario(cfg: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(dumps_scenario(cfg), encoding="utf-8")


def scenario_hash(cfg: ScenarioConfig) -> str:
    """sha256 of the canonical (sorted-key, compact) scenario document."""
    canonical = json.dumps(to_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
