"""Result tables and the run manifest.

Every run writes the same four CSV files (frontier, tiers, ablation,
flows) so downstream tooling can always find them; tables that a given
command does not produce are emitted header-only. Rows are flat keyed
records and numbers are rendered with six significant digits. The
manifest JSON records the scenario identity (id plus content hash), the
settings of the run, and the tool version, and deliberately contains no
timestamps so reruns produce identical bytes.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Mapping, Sequence

from ._version import TOOL_VERSION
from .metrics import erl_crl
from .model import ScenarioConfig
from .scenario_io import scenario_hash
from .sweep import AblationRow, SweepCell, TierRow

FRONTIER_COLUMNS = ("scenario_id", "policy", "multiplier", "friction_case", "metric", "value", "units")
TIERS_COLUMNS = ("scenario_id", "policy", "multiplier", "task_class", "metric", "value", "units")
ABLATION_COLUMNS = (
    "scenario_id", "policy", "multiplier", "friction_case", "capacity_regime",
    "mix_preset", "metric", "value", "units",
)
FLOWS_COLUMNS = ("scenario_id", "policy", "multiplier", "source_region", "dest_region", "metric", "value", "units")

# Per-cell frontier metrics: (metric name, report attribute, units).
_FRONTIER_METRICS = (
    ("rid", "rid", "fraction"),
    ("electricity_cost", "electricity_cost_usd", "usd"),
    ("migration_cost", "migration_cost_usd", "usd"),
    ("total_cost", "total_cost_usd", "usd"),
    ("carbon", "total_carbon_g", "gco2"),
    ("cost_reduction", "cost_reduction_vs_baseline", "fraction"),
    ("carbon_reduction", "carbon_reduction_vs_baseline", "fraction"),
    ("sla_violation_rate", "sla_violation_rate", "fraction"),
    ("migration_cost_share", "migration_cost_share", "fraction"),
    ("mean_service_to_compute", "mean_service_to_compute_ms", "ms"),
)


def format_value(value: float) -> str:
    """Render a number with six significant digits."""
    return "%.6g" % value


def _write_csv(path: Path, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)


def frontier_rows(scenario_id: str, cells: Sequence[SweepCell], friction_case: str = "baseline") -> list[tuple]:
    rows: list[tuple] = []
    for cell in cells:
        for metric, attr, units in _FRONTIER_METRICS:
            value = getattr(cell.report, attr)
            rows.append((
                scenario_id, cell.policy, format_value(cell.multiplier),
                friction_case, metric, format_value(value), units,
            ))
    # Marginal return per unit of budget relaxation, one row per step
    # between consecutive multipliers of the same policy. Returns are
    # measured on electricity spend; migration friction is reported
    # separately through migration_cost_share.
    by_policy: dict[str, list[SweepCell]] = {}
    for cell in cells:
        by_policy.setdefault(cell.policy, []).append(cell)
    for policy in sorted(by_policy):
        policy_cells = sorted(by_policy[policy], key=lambda c: c.multiplier)
        if len(policy_cells) < 2:
            continue
        points = [
            (c.multiplier, c.report.electricity_cost_usd, c.report.total_carbon_g)
            for c in policy_cells
        ]
        for step in erl_crl(points):
            rows.append((
                scenario_id, policy, format_value(step.to_multiplier),
                friction_case, "erl", format_value(step.erl), "usd_per_unit_multiplier",
            ))
            rows.append((
                scenario_id, policy, format_value(step.to_multiplier),
                friction_case, "crl", format_value(step.crl), "gco2_per_unit_multiplier",
            ))
    return rows


def tier_rows_as_records(scenario_id: str, multiplier: float, rows: Sequence[TierRow]) -> list[tuple]:
    records = []
    for row in rows:
        for metric, value in (
            ("local_share", row.local),
            ("regional_share", row.regional),
            ("energy_oriented_share", row.energy_oriented),
        ):
            records.append((
                scenario_id, row.policy, format_value(multiplier),
                row.task_class, metric, format_value(value), "fraction",
            ))
    return records


def ablation_rows_as_records(scenario_id: str, multiplier: float, rows: Sequence[AblationRow]) -> list[tuple]:
    records = []
    for row in rows:
        for metric, value in (
            ("rid", row.rid),
            ("cost_reduction", row.cost_reduction),
            ("carbon_reduction", row.carbon_reduction),
        ):
            records.append((
                scenario_id, row.policy, format_value(multiplier),
                row.friction_case, row.capacity_regime, row.mix_preset,
                metric, format_value(value), "fraction",
            ))
    return records


def flow_rows(scenario_id: str, cells: Sequence[SweepCell]) -> list[tuple]:
    rows = []
    for cell in cells:
        for flow in cell.report.top_flows:
            rows.append((
                scenario_id, cell.policy, format_value(cell.multiplier),
                flow.source, flow.dest, "mass_share", format_value(flow.share), "fraction",
            ))
    return rows


def emit_results(
    out_dir: str | Path,
    cfg: ScenarioConfig,
    settings: Mapping[str, Any],
    cells: Sequence[SweepCell] = (),
    tier_table: Sequence[TierRow] = (),
    tier_multiplier: float = 1.0,
    ablation_table: Sequence[AblationRow] = (),
    friction_case: str = "baseline",
) -> list[Path]:
    """Write the four result CSVs plus the run manifest; returns paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenario_id = cfg.scenario_id

    written = []
    for name, columns, rows in (
        ("frontier.csv", FRONTIER_COLUMNS, frontier_rows(scenario_id, cells, friction_case)),
        ("tiers.csv", TIERS_COLUMNS, tier_rows_as_records(scenario_id, tier_multiplier, tier_table)),
        ("ablation.csv", ABLATION_COLUMNS, ablation_rows_as_records(scenario_id, cfg.latency_multiplier, ablation_table)),
        ("flows.csv", FLOWS_COLUMNS, flow_rows(scenario_id, cells)),
    ):
        path = out / name
        _write_csv(path, columns, rows)
        written.append(path)

    manifest = {
        "tool": "gridroute",
        "tool_version": TOOL_VERSION,
        "scenario_id": scenario_id,
        "scenario_sha256": scenario_hash(cfg),
        "provenance": cfg.provenance,
        "settings": dict(settings),
    }
    manifest_path = out / "run_manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(manifest_path)
    return written
