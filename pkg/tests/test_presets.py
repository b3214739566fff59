"""Structural checks on the bundled ten-region scenario."""

import math

import pytest

from gridroute.model import CLASS_IDS, validate_scenario
from gridroute.presets import (
    DEFAULT_CLASS_MIX,
    build_default_scenario,
    total_compute_demand_per_hour,
)


def test_default_scenario_passes_validation(default_cfg):
    assert validate_scenario(default_cfg) == []


def test_default_scenario_shape(default_cfg):
    assert default_cfg.scenario_id == "global-10-region-baseline"
    assert len(default_cfg.nodes) == 10
    assert len(default_cfg.service_nodes) == 10
    assert tuple(c.id for c in default_cfg.classes) == CLASS_IDS
    assert default_cfg.horizon_hours == 168
    assert default_cfg.units_per_hour == 100.0
    assert default_cfg.wan_inflation == 1.4


def test_one_service_per_region(default_cfg):
    node_ids = [node.id for node in default_cfg.nodes]
    assert [svc.id for svc in default_cfg.service_nodes] == [f"svc-{nid}" for nid in node_ids]
    assert [svc.colocated_compute for svc in default_cfg.service_nodes] == node_ids
    assert all(svc.client_latency_ms == 10.0 for svc in default_cfg.service_nodes)


def test_demand_weights_and_mix_normalized(default_cfg):
    assert math.isclose(sum(svc.demand_weight for svc in default_cfg.service_nodes), 1.0)
    assert math.isclose(sum(DEFAULT_CLASS_MIX.values()), 1.0)
    assert default_cfg.class_mix == DEFAULT_CLASS_MIX


def test_energy_per_compute_unit_is_uniform(default_cfg):
    ratios = {c.energy_per_unit_kwh / c.compute_demand for c in default_cfg.classes}
    assert all(math.isclose(r, 0.4) for r in ratios)


def test_capacity_headroom_without_a_dominant_region(default_cfg):
    demand = total_compute_demand_per_hour(default_cfg.units_per_hour, default_cfg.class_mix)
    for hour in range(default_cfg.horizon_hours):
        caps = [node.capacity_series[hour] for node in default_cfg.nodes]
        assert math.isclose(sum(caps), 1.8 * demand, rel_tol=1e-9)
        assert max(caps) <= 0.35 * demand + 1e-9


def test_series_are_positive_and_aligned(default_cfg):
    for node in default_cfg.nodes:
        for series in (node.price_series, node.moer_series, node.pue_series, node.capacity_series):
            assert len(series) == default_cfg.horizon_hours
            assert all(v > 0.0 for v in series)


def test_price_order_implies_facility_cost_order(default_cfg):
    """The PUE spread is narrow enough that it never flips a price gap.

    Placement compares price * PUE, so a preset where a cheaper-price
    region loses on PUE would make the per-kWh narrative misleading.
    """
    for hour in range(default_cfg.horizon_hours):
        costed = [
            (node.price_series[hour], node.price_series[hour] * node.pue_series[hour])
            for node in default_cfg.nodes
        ]
        for price_a, eff_a in costed:
            for price_b, eff_b in costed:
                if price_a < price_b:
                    assert eff_a < eff_b


def test_rtt_matrix_references_known_regions(default_cfg):
    node_ids = {node.id for node in default_cfg.nodes}
    seen_pairs = set()
    for src, row in default_cfg.rtt_matrix.items():
        assert src in node_ids
        for dst, rtt in row.items():
            assert dst in node_ids
            assert rtt > 0.0
            assert (dst, src) not in seen_pairs, "pairs should be stored once"
            seen_pairs.add((src, dst))


def test_diurnal_price_series_oscillates(default_cfg):
    virginia = default_cfg.node("virginia")
    series = virginia.price_series[:24]
    assert max(series) > 0.085 > min(series)
    assert math.isclose(max(series), 0.085 * 1.05, rel_tol=1e-6)
    # The cycle repeats daily.
    assert virginia.price_series[0] == pytest.approx(virginia.price_series[24])


def test_horizon_override_shortens_all_series():
    cfg = build_default_scenario(horizon_hours=6)
    assert cfg.horizon_hours == 6
    assert all(len(node.price_series) == 6 for node in cfg.nodes)
    assert validate_scenario(cfg) == []
