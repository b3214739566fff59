"""Built-in ten-region scenario with synthetic hourly series.

Every number here is a structural assumption, not a measurement: prices
and carbon intensities are regional proxies with stylized diurnal
variation, PUE and capacity are share-based constants, and the RTT
subset holds representative public inter-region figures. Missing region
pairs fall through to the distance formula. The point of the preset is
a deterministic, internally consistent world to exercise the placement
mechanics, not a forecast of any real fleet.
"""

from __future__ import annotations

import numpy as np

from .model import (
    ComputeNode,
    FrictionParams,
    PolicyWeights,
    ScenarioConfig,
    ServiceNode,
    TaskClass,
    TierThresholds,
)

DEFAULT_SCENARIO_ID = "global-10-region-baseline"
DEFAULT_HORIZON_HOURS = 168
DEFAULT_UNITS_PER_HOUR = 100.0

# Region table: id, display name, latitude, longitude,
# price base $/kWh, price swing (relative), MOER base g/kWh, MOER swing,
# PUE, capacity share of total hourly demand, service demand weight,
# diurnal phase (hours, roughly local solar time).
_REGIONS = (
    ("virginia", "Virginia", 38.95, -77.45, 0.085, 0.05, 380.0, 0.25, 1.15, 0.26, 0.22, 19),
    ("oregon", "Oregon", 45.60, -121.18, 0.042, 0.05, 120.0, 0.15, 1.08, 0.20, 0.07, 16),
    ("frankfurt", "Frankfurt", 50.12, 8.68, 0.145, 0.06, 310.0, 0.35, 1.19, 0.12, 0.09, 1),
    ("london", "London", 51.51, -0.13, 0.135, 0.06, 220.0, 0.35, 1.19, 0.26, 0.14, 0),
    ("singapore", "Singapore", 1.35, 103.82, 0.125, 0.04, 400.0, 0.10, 1.19, 0.12, 0.12, 7),
    ("tokyo", "Tokyo", 35.68, 139.76, 0.155, 0.05, 450.0, 0.20, 1.19, 0.14, 0.09, 9),
    ("dubai", "Dubai", 25.20, 55.27, 0.095, 0.04, 430.0, 0.12, 1.15, 0.10, 0.04, 4),
    ("sydney", "Sydney", -33.87, 151.21, 0.095, 0.06, 520.0, 0.30, 1.15, 0.12, 0.05, 10),
    ("beijing", "Beijing", 39.90, 116.40, 0.070, 0.05, 580.0, 0.15, 1.13, 0.13, 0.12, 8),
    ("sao-paulo", "São Paulo", -23.55, -46.63, 0.080, 0.05, 90.0, 0.40, 1.15, 0.35, 0.06, 21),
)

# Round-trip times in ms for pairs with published reference figures;
# one direction stored, lookups are symmetric. Everything else uses the
# great-circle fallback.
_RTT_MS = {
    "virginia": {
        "oregon": 64.0,
        "london": 76.0,
        "frankfurt": 88.0,
        "sao-paulo": 116.0,
        "tokyo": 145.0,
        "singapore": 230.0,
        "dubai": 185.0,
    },
    "oregon": {"tokyo": 90.0, "singapore": 165.0, "sydney": 140.0, "london": 130.0},
    "london": {"frankfurt": 14.0, "dubai": 110.0, "singapore": 170.0},
    "frankfurt": {"dubai": 105.0},
    "singapore": {"tokyo": 68.0, "sydney": 92.0, "dubai": 85.0, "beijing": 72.0},
    "tokyo": {"beijing": 35.0, "sydney": 105.0},
    "sydney": {"sao-paulo": 310.0},
}

# Workload classes at representative point values. Friction coefficients
# are calibrated so interactive work stays home unless a budget several
# times the default opens up a clearly better region, standard online
# work relocates from expensive sources only, long agent sessions carry
# enough state and cache that they move only when the energy gap is
# wide, and batch work moves nearly freely. Energy per compute-unit is
# uniform (0.4 kWh/cu) so capacity contention between classes is
# energy-neutral and budget relaxations cannot lose money through class
# displacement alone.
_CLASSES = (
    TaskClass(
        id="A",
        latency_budget_ms=200.0,
        energy_per_unit_kwh=0.1,
        compute_demand=0.25,
        rounds=1,
        inference_time_ms=50.0,
        statefulness="high",
        friction=FrictionParams(
            state_cost_per_unit=0.012,
            cache_cost_per_unit=0.008,
            egress_gb_per_unit=0.001,
            egress_price_per_gb=0.05,
            replica_cost_per_unit=0.00465,
        ),
    ),
    TaskClass(
        id="B",
        latency_budget_ms=1000.0,
        energy_per_unit_kwh=0.4,
        compute_demand=1.0,
        rounds=2,
        inference_time_ms=200.0,
        statefulness="medium",
        friction=FrictionParams(
            state_cost_per_unit=0.08,
            cache_cost_per_unit=0.06,
            egress_gb_per_unit=0.002,
            egress_price_per_gb=0.05,
            replica_cost_per_unit=0.0049,
        ),
    ),
    TaskClass(
        id="C",
        latency_budget_ms=30_000.0,
        energy_per_unit_kwh=1.2,
        compute_demand=3.0,
        rounds=5,
        inference_time_ms=500.0,
        statefulness="medium",
        friction=FrictionParams(
            state_cost_per_unit=0.20,
            cache_cost_per_unit=0.10,
            egress_gb_per_unit=0.002,
            egress_price_per_gb=0.05,
            replica_cost_per_unit=0.004,
        ),
    ),
    TaskClass(
        id="D",
        latency_budget_ms=3_600_000.0,
        energy_per_unit_kwh=2.0,
        compute_demand=5.0,
        rounds=3,
        inference_time_ms=2000.0,
        statefulness="low",
        friction=FrictionParams(
            state_cost_per_unit=0.004,
            cache_cost_per_unit=0.002,
            egress_gb_per_unit=0.004,
            egress_price_per_gb=0.05,
            replica_cost_per_unit=0.002,
        ),
    ),
)

DEFAULT_CLASS_MIX = {"A": 0.35, "B": 0.30, "C": 0.20, "D": 0.15}


def _sinusoid(base: float, swing: float, phase_hours: int, horizon: int) -> tuple[float, ...]:
    """Hourly series base*(1 + swing*sin(2*pi*(h+phase)/24))."""
    hours = np.arange(horizon, dtype=float)
    series = base * (1.0 + swing * np.sin(2.0 * np.pi * (hours + phase_hours) / 24.0))
    return tuple(float(v) for v in series)


def total_compute_demand_per_hour(units_per_hour: float, class_mix: dict[str, float]) -> float:
    """System-wide compute-units demanded each hour under the mix."""
    by_id = {c.id: c for c in _CLASSES}
    return units_per_hour * sum(frac * by_id[cid].compute_demand for cid, frac in class_mix.items())


def build_default_scenario(
    horizon_hours: int = DEFAULT_HORIZON_HOURS,
    units_per_hour: float = DEFAULT_UNITS_PER_HOUR,
) -> ScenarioConfig:
    """Construct the bundled ten-region scenario.

    Capacity is share-based: each region offers share * total hourly
    demand, with shares summing to 1.8 and no share above 0.35, so the
    fleet has global headroom but no region can absorb everything.
    """
    demand_cu = total_compute_demand_per_hour(units_per_hour, DEFAULT_CLASS_MIX)

    nodes = []
    services = []
    for (rid, name, lat, lon, price, p_swing, moer, m_swing, pue, cap_share, weight, phase) in _REGIONS:
        nodes.append(
            ComputeNode(
                id=rid,
                display_name=name,
                latitude=lat,
                longitude=lon,
                price_series=_sinusoid(price, p_swing, phase, horizon_hours),
                moer_series=_sinusoid(moer, m_swing, phase, horizon_hours),
                pue_series=(pue,) * horizon_hours,
                capacity_series=(cap_share * demand_cu,) * horizon_hours,
            )
        )
        services.append(
            ServiceNode(
                id=f"svc-{rid}",
                colocated_compute=rid,
                client_latency_ms=10.0,
                demand_weight=weight,
            )
        )

    return ScenarioConfig(
        scenario_id=DEFAULT_SCENARIO_ID,
        nodes=tuple(nodes),
        service_nodes=tuple(services),
        classes=_CLASSES,
        class_mix=dict(DEFAULT_CLASS_MIX),
        horizon_hours=horizon_hours,
        units_per_hour=units_per_hour,
        rtt_matrix={src: dict(row) for src, row in _RTT_MS.items()},
        egress_price_matrix=None,
        wan_inflation=1.4,
        fallback_speed_km_per_ms=200.0,
        fallback_overhead_ms=20.0,
        intra_region_floor_ms=1.0,
        rounds_are_round_trips=False,
        latency_multiplier=1.0,
        weights=PolicyWeights(alpha=1.0, beta=1.0, gamma=1.0, eta=1.0),
        delay_penalty_mode="geographic",
        legal_mask=None,
        system_mask=None,
        tier_thresholds=TierThresholds(local_ms=15.0, regional_ms=80.0),
        rid_reference="colocated",
        provenance="synthetic",
    )
