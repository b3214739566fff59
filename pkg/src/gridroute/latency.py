"""Latency estimation between service ingress points and compute regions.

The one-way service-to-compute time prefers a measured round-trip entry
from the scenario's RTT matrix; region pairs without a measurement fall
back to a great-circle propagation estimate plus a fixed processing
overhead. Both paths are scaled by a WAN inflation factor standing in
for routing indirection. A service node talking to its own colocated
region pays a small intra-region floor and never touches the fallback.
"""

from __future__ import annotations

import math

from .model import ScenarioConfig, ServiceNode, TaskClass

EARTH_RADIUS_KM = 6371.0


def great_circle_km(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in km on a sphere of radius 6371 km."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlam = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(a)))


def service_to_compute_ms(cfg: ScenarioConfig, service: ServiceNode, node_id: str) -> float:
    """One-way network latency from a service node's region to a compute region."""
    src = service.colocated_compute
    if src == node_id:
        return cfg.intra_region_floor_ms

    rtt = cfg.rtt_ms(src, node_id)
    if rtt is None:
        rtt = cfg.rtt_ms(node_id, src)
    if rtt is not None:
        return (rtt / 2.0) * cfg.wan_inflation

    a = cfg.node(src)
    b = cfg.node(node_id)
    d = great_circle_km(a.latitude, a.longitude, b.latitude, b.longitude)
    return (d / cfg.fallback_speed_km_per_ms + cfg.fallback_overhead_ms) * cfg.wan_inflation


def end_to_end_ms(cfg: ScenarioConfig, service: ServiceNode, task_class: TaskClass, node_id: str) -> float:
    """Total perceived latency for one task of the class placed on a node.

    Client leg + per-round service-to-compute legs + queueing + inference.
    Rounds count one-way traversals unless the scenario flags them as
    round trips, in which case each round pays the leg twice.
    """
    leg = service_to_compute_ms(cfg, service, node_id)
    per_round = 2.0 * leg if cfg.rounds_are_round_trips else leg
    return (
        service.client_latency_ms
        + task_class.rounds * per_round
        + task_class.queueing_time_ms
        + task_class.inference_time_ms
    )
