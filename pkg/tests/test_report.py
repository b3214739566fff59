"""Tests for the PNG figure rendering."""

from gridroute.metrics import MetricsReport
from gridroute.report import render_figures
from gridroute.sweep import AblationRow, SweepCell, TierRow

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _report(rid, cost_reduction):
    return MetricsReport(
        rid=rid,
        electricity_cost_usd=100.0,
        migration_cost_usd=1.0,
        total_cost_usd=101.0,
        total_carbon_g=1000.0,
        cost_reduction_vs_baseline=cost_reduction,
        carbon_reduction_vs_baseline=0.1,
        sla_violation_rate=0.0,
        tier_shares={},
        migration_cost_share=0.01,
        mean_service_to_compute_ms=12.0,
        top_flows=(),
    )


def _cells():
    return [
        SweepCell("joint", 1.0, _report(0.2, 0.05)),
        SweepCell("joint", 1.5, _report(0.4, 0.12)),
        SweepCell("local_only", 1.0, _report(0.0, 0.0)),
        SweepCell("local_only", 1.5, _report(0.0, 0.0)),
    ]


def _tier_table():
    return [
        TierRow("joint", "A", 0.9, 0.1, 0.0),
        TierRow("joint", "D", 0.2, 0.1, 0.7),
        TierRow("local_only", "A", 1.0, 0.0, 0.0),
    ]


def _ablation_table():
    return [
        AblationRow("off", "loose", "base", "joint", 0.8, 0.3, 0.4),
        AblationRow("off", "tight", "base", "joint", 0.5, 0.2, 0.25),
        AblationRow("high", "loose", "base", "joint", 0.3, 0.1, 0.15),
        AblationRow("high", "tight", "base", "joint", 0.2, 0.05, 0.1),
    ]


def test_render_figures_writes_one_png_per_populated_table(tmp_path):
    written = render_figures(
        tmp_path,
        cells=_cells(),
        tier_table=_tier_table(),
        tier_multiplier=1.5,
        ablation_table=_ablation_table(),
    )

    assert [path.name for path in written] == ["frontier.png", "tiers.png", "ablation.png"]
    for path in written:
        data = path.read_bytes()
        assert data.startswith(PNG_MAGIC)
        assert len(data) > 1000


def test_render_figures_skips_empty_tables(tmp_path):
    assert render_figures(tmp_path) == []
    assert list(tmp_path.iterdir()) == []


def test_render_figures_partial_tables(tmp_path):
    written = render_figures(tmp_path, cells=_cells())
    assert [path.name for path in written] == ["frontier.png"]
    assert not (tmp_path / "tiers.png").exists()
