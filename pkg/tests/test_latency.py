"""Latency estimation: great-circle distance, RTT lookups, fallback path."""

from __future__ import annotations

import math

import pytest

from gridroute import (
    EARTH_RADIUS_KM,
    ServiceNode,
    end_to_end_ms,
    great_circle_km,
    service_to_compute_ms,
)
from helpers import make_class, make_node, make_scenario, two_region_scenario

# Independently computed with the haversine formula on a 6371 km sphere
# (Virginia and Oregon region coordinates from the bundled scenario).
VIRGINIA_OREGON_KM = 3626.3448130127676


def test_great_circle_matches_hand_computed_value():
    assert great_circle_km(38.95, -77.45, 45.60, -121.18) == pytest.approx(
        VIRGINIA_OREGON_KM, rel=1e-12
    )


def test_great_circle_antipodal_is_half_circumference():
    assert great_circle_km(0.0, 0.0, 0.0, 180.0) == pytest.approx(
        math.pi * EARTH_RADIUS_KM, rel=1e-12
    )


def test_great_circle_zero_for_same_point():
    assert great_circle_km(51.51, -0.13, 51.51, -0.13) == 0.0


def test_great_circle_symmetric():
    there = great_circle_km(35.68, 139.76, -33.87, 151.21)
    back = great_circle_km(-33.87, 151.21, 35.68, 139.76)
    assert there == pytest.approx(back, rel=1e-15)


def test_rtt_entry_gives_inflated_one_way():
    cfg = two_region_scenario(rtt=40.0, wan_inflation=1.4)
    svc = cfg.service("svc-home")
    assert service_to_compute_ms(cfg, svc, "away") == pytest.approx(40.0 / 2.0 * 1.4)


def test_rtt_lookup_is_symmetric():
    # The table stores home->away only; a service colocated with "away"
    # must still find the measurement in the reverse direction.
    cfg = two_region_scenario(rtt=40.0, wan_inflation=1.0)
    cfg = make_scenario(
        cfg.nodes,
        cfg.service_nodes + (ServiceNode(id="svc-away", colocated_compute="away", demand_weight=1.0),),
        cfg.classes,
        rtt_matrix={"home": {"away": 40.0}},
    )
    assert service_to_compute_ms(cfg, cfg.service("svc-away"), "home") == pytest.approx(20.0)


def test_fallback_formula_when_rtt_missing():
    nodes = (
        make_node("east", lat=0.0, lon=0.0),
        make_node("west", lat=0.0, lon=90.0),
    )
    services = (ServiceNode(id="svc-east", colocated_compute="east", demand_weight=1.0),)
    cfg = make_scenario(nodes, services, (make_class(),), wan_inflation=1.5)
    distance = great_circle_km(0.0, 0.0, 0.0, 90.0)
    expected = (distance / cfg.fallback_speed_km_per_ms + cfg.fallback_overhead_ms) * 1.5
    assert service_to_compute_ms(cfg, cfg.service("svc-east"), "west") == pytest.approx(expected)


def test_colocated_pays_floor_never_fallback():
    # Identical coordinates would give fallback overhead*inflation = 30 ms;
    # the colocated path must return the 1 ms floor instead, uninflated.
    cfg = two_region_scenario(wan_inflation=1.5)
    assert service_to_compute_ms(cfg, cfg.service("svc-home"), "home") == 1.0


def test_end_to_end_composition_frozen(default_cfg):
    # Client 10 + 5 rounds x (116/2 x 1.4) + 500 inference = 916 ms.
    svc = default_cfg.service("svc-virginia")
    cls = default_cfg.task_class("C")
    assert end_to_end_ms(default_cfg, svc, cls, "sao-paulo") == pytest.approx(916.0)


def test_rounds_as_round_trips_doubles_each_leg():
    cls = make_class(rounds=3, inference=50.0, queueing=5.0)
    one_way = two_region_scenario(rtt=40.0, classes=(cls,))
    both_ways = two_region_scenario(rtt=40.0, classes=(cls,), rounds_are_round_trips=True)
    svc = one_way.service("svc-home")
    leg = 20.0
    assert end_to_end_ms(one_way, svc, cls, "away") == pytest.approx(10.0 + 3 * leg + 5.0 + 50.0)
    assert end_to_end_ms(both_ways, svc, cls, "away") == pytest.approx(10.0 + 3 * 2 * leg + 5.0 + 50.0)
