"""Figure rendering for the result tables.

The CSV files are the contract; these plots are a convenience layer the
CLI writes next to them so a run can be eyeballed without extra tooling.
Rendering uses the Agg backend and fixed ordering so the images are
reproducible.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .model import CLASS_IDS
from .sweep import AblationRow, SweepCell, TierRow

TIER_COLORS = {"local": "#4878d0", "regional": "#ee854a", "energy_oriented": "#6acc64"}


def plot_frontier(cells: Sequence[SweepCell], path: str | Path) -> Path:
    """Relocated demand and cost reduction versus the latency multiplier."""
    by_policy: dict[str, list[SweepCell]] = {}
    for cell in cells:
        by_policy.setdefault(cell.policy, []).append(cell)

    fig, (ax_rid, ax_cost) = plt.subplots(1, 2, figsize=(10, 4), sharex=True)
    for policy in sorted(by_policy):
        points = sorted(by_policy[policy], key=lambda c: c.multiplier)
        xs = [c.multiplier for c in points]
        ax_rid.plot(xs, [100.0 * c.report.rid for c in points], marker="o", label=policy)
        ax_cost.plot(xs, [100.0 * c.report.cost_reduction_vs_baseline for c in points], marker="o", label=policy)
    ax_rid.set_xlabel("latency budget multiplier")
    ax_rid.set_ylabel("relocated demand (% of energy)")
    ax_rid.set_title("Mobility frontier")
    ax_cost.set_xlabel("latency budget multiplier")
    ax_cost.set_ylabel("electricity cost reduction (%)")
    ax_cost.set_title("Savings frontier")
    ax_rid.grid(True, alpha=0.3)
    ax_cost.grid(True, alpha=0.3)
    ax_rid.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_tiers(rows: Sequence[TierRow], path: str | Path, multiplier: float) -> Path:
    """Stacked tier shares per task class, one panel per policy."""
    policies = sorted({row.policy for row in rows})
    fig, axes = plt.subplots(1, max(len(policies), 1), figsize=(3.2 * max(len(policies), 1), 3.6), squeeze=False)
    for ax, policy in zip(axes[0], policies):
        policy_rows = {row.task_class: row for row in rows if row.policy == policy}
        classes = [c for c in CLASS_IDS if c in policy_rows]
        local = [policy_rows[c].local for c in classes]
        regional = [policy_rows[c].regional for c in classes]
        energy = [policy_rows[c].energy_oriented for c in classes]
        bottoms = [l + r for l, r in zip(local, regional)]
        ax.bar(classes, local, color=TIER_COLORS["local"], label="local")
        ax.bar(classes, regional, bottom=local, color=TIER_COLORS["regional"], label="regional")
        ax.bar(classes, energy, bottom=bottoms, color=TIER_COLORS["energy_oriented"], label="energy-oriented")
        ax.set_ylim(0.0, 1.0)
        ax.set_title(f"{policy} (x{multiplier:g})", fontsize=10)
        ax.set_xlabel("task class")
    axes[0][0].set_ylabel("share of class mass")
    axes[0][-1].legend(fontsize=8, loc="lower right")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_ablation(rows: Sequence[AblationRow], path: str | Path) -> Path:
    """Relocated demand by friction case, grouped by capacity regime."""
    cases = list(dict.fromkeys(row.friction_case for row in rows))
    regimes = list(dict.fromkeys(row.capacity_regime for row in rows))

    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.8 / max(len(regimes), 1)
    for i, regime in enumerate(regimes):
        values = []
        for case in cases:
            matching = [
                row.rid for row in rows
                if row.friction_case == case and row.capacity_regime == regime
            ]
            values.append(100.0 * sum(matching) / len(matching) if matching else 0.0)
        offsets = [j + (i - (len(regimes) - 1) / 2.0) * width for j in range(len(cases))]
        ax.bar(offsets, values, width=width, label=f"capacity {regime}")
    ax.set_xticks(range(len(cases)))
    ax.set_xticklabels(cases)
    ax.set_xlabel("migration friction case")
    ax.set_ylabel("relocated demand (% of energy)")
    ax.set_title("Friction and capacity sensitivity (mean over mixes)")
    ax.grid(True, axis="y", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_figures(
    out_dir: str | Path,
    cells: Sequence[SweepCell] = (),
    tier_table: Sequence[TierRow] = (),
    tier_multiplier: float = 1.0,
    ablation_table: Sequence[AblationRow] = (),
) -> list[Path]:
    """Render one PNG per non-empty table; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if cells:
        written.append(plot_frontier(cells, out / "frontier.png"))
    if tier_table:
        written.append(plot_tiers(tier_table, out / "tiers.png", tier_multiplier))
    if ablation_table:
        written.append(plot_ablation(ablation_table, out / "ablation.png"))
    return written
