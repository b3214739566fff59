"""Per-unit cost breakdowns, normalization, and net benefit."""

from __future__ import annotations

import pytest

from gridroute import (
    DegenerateNormalizerError,
    FrictionParams,
    PolicyWeights,
    ServiceNode,
    local_unit_cost,
    net_benefit,
    unit_cost,
)
from helpers import make_class, make_node, make_scenario, two_region_scenario


def test_energy_carbon_facility_components():
    cfg = two_region_scenario(home_price=0.10, home_moer=200.0)
    # home node: pue 1.2, class energy 0.4 kWh
    uc = local_unit_cost(cfg, 0, cfg.service("svc-home"), cfg.task_class("B"))
    assert uc.facility_energy_kwh == pytest.approx(0.4 * 1.2)
    assert uc.energy_cost == pytest.approx(0.4 * 1.2 * 0.10)
    assert uc.carbon_g == pytest.approx(0.4 * 1.2 * 200.0)


def test_delay_penalty_geographic_is_the_leg():
    cfg = two_region_scenario(rtt=40.0, delay_penalty_mode="geographic")
    uc = unit_cost(cfg, 0, cfg.service("svc-home"), cfg.task_class("B"), "away")
    assert uc.delay_penalty == pytest.approx(20.0)
    assert uc.service_to_compute_ms == pytest.approx(20.0)


def test_delay_penalty_excess_measures_budget_overrun():
    cls = make_class("B", budget=25.0)
    cfg = two_region_scenario(rtt=40.0, classes=(cls,), delay_penalty_mode="excess")
    svc = cfg.service("svc-home")
    # e2e = client 10 + leg 20 = 30, budget 25 -> excess 5
    over = unit_cost(cfg, 0, svc, cls, "away")
    assert over.delay_penalty == pytest.approx(5.0)
    assert over.violates_budget
    # local e2e = 10 + 1 = 11, within budget -> zero excess
    home = unit_cost(cfg, 0, svc, cls, "home")
    assert home.delay_penalty == 0.0
    assert not home.violates_budget


def test_migration_components_frozen_example():
    friction = FrictionParams(
        state_cost_per_unit=0.01,
        cache_cost_per_unit=0.01,
        egress_gb_per_unit=0.001,
        egress_price_per_gb=0.05,
        replica_cost_per_unit=0.01,
    )
    cls = make_class("B", statefulness="medium", friction=friction)
    cfg = two_region_scenario(classes=(cls,))
    uc = unit_cost(cfg, 0, cfg.service("svc-home"), cls, "away")
    # medium statefulness factor 0.5 halves state and cache
    assert uc.migration_state == pytest.approx(0.005)
    assert uc.migration_cache == pytest.approx(0.005)
    assert uc.migration_egress == pytest.approx(0.00005)
    assert uc.migration_replica == pytest.approx(0.01)
    assert uc.migration_cost == pytest.approx(0.02005)
    # 100 units of mass would pay 2.005 dollars of friction
    assert uc.migration_cost * 100.0 == pytest.approx(2.005)


def test_migration_zero_on_colocated_node():
    friction = FrictionParams(state_cost_per_unit=5.0, replica_cost_per_unit=5.0)
    cls = make_class("B", statefulness="high", friction=friction)
    cfg = two_region_scenario(classes=(cls,))
    uc = local_unit_cost(cfg, 0, cfg.service("svc-home"), cls)
    assert uc.migration_cost == 0.0
    assert (uc.migration_state, uc.migration_cache, uc.migration_egress, uc.migration_replica) == (
        0.0,
        0.0,
        0.0,
        0.0,
    )


def test_egress_matrix_prices_specific_corridor():
    friction = FrictionParams(egress_gb_per_unit=2.0, egress_price_per_gb=0.05)
    cls = make_class("B", friction=friction)
    cfg = two_region_scenario(
        classes=(cls,), egress_price_matrix={"home": {"away": 0.25}}
    )
    uc = unit_cost(cfg, 0, cfg.service("svc-home"), cls, "away")
    assert uc.migration_egress == pytest.approx(2.0 * 0.25)


def test_raw_objective_recomposes_from_terms():
    weights = PolicyWeights(alpha=2.0, beta=0.5, gamma=0.1, eta=3.0)
    friction = FrictionParams(state_cost_per_unit=0.4, replica_cost_per_unit=0.1)
    cls = make_class("B", statefulness="high", friction=friction)
    cfg = two_region_scenario(classes=(cls,), weights=weights)
    uc = unit_cost(cfg, 0, cfg.service("svc-home"), cls, "away")
    expected = (
        2.0 * uc.energy_cost + 0.5 * uc.carbon_g + 0.1 * uc.delay_penalty + 3.0 * uc.migration_cost
    )
    assert uc.raw_objective == pytest.approx(expected, rel=1e-15)


def test_normalized_objective_scales_against_colocated():
    cfg = two_region_scenario(home_price=0.10, away_price=0.05, home_moer=300.0, away_moer=100.0)
    svc = cfg.service("svc-home")
    cls = cfg.task_class("B")
    home = local_unit_cost(cfg, 0, svc, cls)
    budget = cls.latency_budget_ms
    # alpha + beta + gamma*(floor/budget): money and carbon ratios are 1 at home
    assert home.normalized_objective == pytest.approx(1.0 + 1.0 + 1.0 / budget)
    away = unit_cost(cfg, 0, svc, cls, "away")
    assert away.normalized_objective == pytest.approx(
        away.energy_cost / home.energy_cost
        + away.carbon_g / home.carbon_g
        + away.service_to_compute_ms / budget
    )


def test_degenerate_normalizer_names_node_and_hour():
    cfg = two_region_scenario(home_price=0.0)
    with pytest.raises(DegenerateNormalizerError) as err:
        local_unit_cost(cfg, 0, cfg.service("svc-home"), cfg.task_class("B"))
    assert "'home'" in str(err.value)
    assert "hour 0" in str(err.value)


def test_net_benefit_positive_for_cheap_clean_remote():
    cfg = two_region_scenario(home_price=0.10, away_price=0.04, home_moer=400.0, away_moer=80.0)
    nb = net_benefit(cfg, 0, cfg.service("svc-home"), cfg.task_class("B"), "away")
    assert nb > 0.0


def test_net_benefit_negative_when_friction_dominates():
    friction = FrictionParams(state_cost_per_unit=10.0)
    cls = make_class("B", statefulness="high", friction=friction)
    cfg = two_region_scenario(
        home_price=0.10, away_price=0.04, home_moer=400.0, away_moer=80.0, classes=(cls,)
    )
    nb = net_benefit(cfg, 0, cfg.service("svc-home"), cls, "away")
    assert nb < 0.0


def test_net_benefit_zero_against_itself():
    cfg = two_region_scenario()
    assert net_benefit(cfg, 0, cfg.service("svc-home"), cfg.task_class("B"), "home") == 0.0
