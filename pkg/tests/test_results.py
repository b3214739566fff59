"""Tests for the CSV tables and the run manifest."""

import json

from gridroute.metrics import FlowShare, MetricsReport
from gridroute.results import (
    ABLATION_COLUMNS,
    FLOWS_COLUMNS,
    FRONTIER_COLUMNS,
    TIERS_COLUMNS,
    ablation_rows_as_records,
    emit_results,
    flow_rows,
    format_value,
    frontier_rows,
    tier_rows_as_records,
)
from gridroute import ServiceNode
from gridroute.scenario_io import scenario_hash
from gridroute.sweep import AblationRow, SweepCell, TierRow

from helpers import make_class, make_node, make_scenario


def _report(**overrides):
    base = dict(
        rid=0.25,
        electricity_cost_usd=123.456789,
        migration_cost_usd=1.5,
        total_cost_usd=124.956789,
        total_carbon_g=2500.0,
        cost_reduction_vs_baseline=0.1,
        carbon_reduction_vs_baseline=0.2,
        sla_violation_rate=0.0,
        tier_shares={},
        migration_cost_share=0.012,
        mean_service_to_compute_ms=18.0,
        top_flows=(FlowShare("home", "away", 0.6),),
    )
    base.update(overrides)
    return MetricsReport(**base)


def _tiny_cfg():
    node = make_node("solo", capacity=1e9)
    service = ServiceNode(id="svc-solo", colocated_compute="solo", demand_weight=1.0)
    return make_scenario((node,), (service,), (make_class("A"),), scenario_id="tiny")


def test_format_value_uses_six_significant_digits():
    assert format_value(123.456789) == "123.457"
    assert format_value(0.000123456789) == "0.000123457"
    assert format_value(1.0) == "1"
    assert format_value(2500000.0) == "2.5e+06"


def test_frontier_rows_one_metric_row_per_report_field():
    cell = SweepCell(policy="joint", multiplier=1.0, report=_report())
    rows = frontier_rows("sc", [cell], friction_case="baseline")

    assert len(rows) == 10
    metrics = [row[4] for row in rows]
    assert metrics == [
        "rid", "electricity_cost", "migration_cost", "total_cost", "carbon",
        "cost_reduction", "carbon_reduction", "sla_violation_rate",
        "migration_cost_share", "mean_service_to_compute",
    ]
    assert ("sc", "joint", "1", "baseline", "electricity_cost", "123.457", "usd") in rows
    assert ("sc", "joint", "1", "baseline", "carbon", "2500", "gco2") in rows


def test_frontier_rows_marginal_returns_use_electricity_cost():
    cells = [
        SweepCell("joint", 1.0, _report(electricity_cost_usd=100.0, total_cost_usd=150.0, total_carbon_g=1000.0)),
        SweepCell("joint", 1.5, _report(electricity_cost_usd=90.0, total_cost_usd=160.0, total_carbon_g=800.0)),
    ]
    rows = frontier_rows("sc", cells)

    assert len(rows) == 2 * 10 + 2
    # (100 - 90) / 0.5 on electricity, not (150 - 160) / 0.5 on total cost.
    assert ("sc", "joint", "1.5", "baseline", "erl", "20", "usd_per_unit_multiplier") in rows
    assert ("sc", "joint", "1.5", "baseline", "crl", "400", "gco2_per_unit_multiplier") in rows


def test_frontier_rows_single_point_has_no_return_steps():
    rows = frontier_rows("sc", [SweepCell("joint", 1.0, _report())])
    assert all(row[4] not in ("erl", "crl") for row in rows)


def test_flow_rows_expand_top_flows():
    cell = SweepCell(policy="joint", multiplier=1.5, report=_report())
    rows = flow_rows("sc", [cell])
    assert rows == [("sc", "joint", "1.5", "home", "away", "mass_share", "0.6", "fraction")]


def test_tier_rows_three_records_per_row():
    rows = tier_rows_as_records("sc", 1.5, [TierRow("joint", "A", 0.5, 0.25, 0.25)])
    assert rows == [
        ("sc", "joint", "1.5", "A", "local_share", "0.5", "fraction"),
        ("sc", "joint", "1.5", "A", "regional_share", "0.25", "fraction"),
        ("sc", "joint", "1.5", "A", "energy_oriented_share", "0.25", "fraction"),
    ]


def test_ablation_rows_carry_the_grid_coordinates():
    row = AblationRow(
        friction_case="off", capacity_regime="tight", mix_preset="base",
        policy="joint", rid=0.5, cost_reduction=0.1, carbon_reduction=0.2,
    )
    records = ablation_rows_as_records("sc", 1.0, [row])
    assert ("sc", "joint", "1", "off", "tight", "base", "rid", "0.5", "fraction") in records
    assert ("sc", "joint", "1", "off", "tight", "base", "carbon_reduction", "0.2", "fraction") in records


def test_emit_results_writes_all_four_tables_header_only_when_empty(tmp_path):
    cfg = _tiny_cfg()
    written = emit_results(tmp_path, cfg, {"command": "noop"})

    names = [path.name for path in written]
    assert names == ["frontier.csv", "tiers.csv", "ablation.csv", "flows.csv", "run_manifest.json"]
    for path, columns in zip(written, (FRONTIER_COLUMNS, TIERS_COLUMNS, ABLATION_COLUMNS, FLOWS_COLUMNS)):
        assert path.read_text(encoding="utf-8") == ",".join(columns) + "\n"


def test_emit_results_manifest_identifies_the_scenario(tmp_path):
    cfg = _tiny_cfg()
    emit_results(tmp_path, cfg, {"command": "noop", "latency_multiplier": 1.0})
    text = (tmp_path / "run_manifest.json").read_text(encoding="utf-8")
    manifest = json.loads(text)

    assert sorted(manifest) == [
        "provenance", "scenario_id", "scenario_sha256", "settings", "tool", "tool_version",
    ]
    assert manifest["tool"] == "gridroute"
    assert manifest["scenario_id"] == "tiny"
    assert manifest["scenario_sha256"] == scenario_hash(cfg)
    assert manifest["settings"]["command"] == "noop"
    # Reruns must be byte-identical, so nothing time-dependent may appear.
    assert "time" not in text.lower()
    assert text == json.dumps(manifest, indent=2, sort_keys=True) + "\n"


def test_emit_results_reruns_are_byte_identical(tmp_path):
    cfg = _tiny_cfg()
    cells = [
        SweepCell("joint", 1.0, _report()),
        SweepCell("local_only", 1.0, _report(rid=0.0, top_flows=())),
    ]
    tiers = [TierRow("joint", "A", 1.0, 0.0, 0.0)]
    settings = {"command": "sweep", "multipliers": [1.0]}

    first = emit_results(tmp_path / "a", cfg, settings, cells=cells, tier_table=tiers)
    second = emit_results(tmp_path / "b", cfg, settings, cells=cells, tier_table=tiers)
    for path_a, path_b in zip(first, second):
        assert path_a.read_bytes() == path_b.read_bytes()
