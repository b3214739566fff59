"""Three-stage experiment driver: latency sweep, per-class tier analysis,
and the friction/capacity/mix sensitivity grid.

Each cell of every stage is an independent full-horizon run, so cells
can execute on a thread pool; results are reassembled in a fixed key
order and are identical regardless of thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .allocator import POLICY_KINDS, Policy, Trace, run_horizon
from .metrics import MetricsReport, build_report, reduction, rid, tier_shares, totals
from .model import FrictionParams, ScenarioConfig

FRICTION_CASES = ("off", "egress_only", "state_cache_egress", "high")
CAPACITY_REGIMES = {"loose": 2.0, "baseline": 1.0, "tight": 0.6}
MIX_PRESETS = ("interactive_heavy", "balanced", "batch_heavy")
HIGH_FRICTION_FACTOR = 3.0
MIX_SHIFT = 0.15  # mass moved between classes A and D by the mix presets

DEFAULT_MULTIPLIERS = (0.5, 0.75, 1.0, 1.5, 2.5)


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition for the experiment stages."""

    multipliers: tuple[float, ...] = DEFAULT_MULTIPLIERS
    policies: tuple[str, ...] = POLICY_KINDS
    friction_cases: tuple[str, ...] = FRICTION_CASES
    capacity_regimes: tuple[str, ...] = ("loose", "baseline", "tight")
    mix_presets: tuple[str, ...] = MIX_PRESETS

    def __post_init__(self):
        if not self.multipliers or not self.policies:
            raise ValueError("sweep spec needs at least one multiplier and one policy")
        if any(m2 <= m1 for m1, m2 in zip(self.multipliers, self.multipliers[1:])):
            raise ValueError("multipliers must be strictly increasing")
        for policy in self.policies:
            if policy not in POLICY_KINDS:
                raise ValueError(f"unknown policy {policy!r}")
        for case in self.friction_cases:
            if case not in FRICTION_CASES:
                raise ValueError(f"unknown friction case {case!r}")
        for regime in self.capacity_regimes:
            if regime not in CAPACITY_REGIMES:
                raise ValueError(f"unknown capacity regime {regime!r}")
        for preset in self.mix_presets:
            if preset not in MIX_PRESETS:
                raise ValueError(f"unknown mix preset {preset!r}")


@dataclass(frozen=True)
class SweepCell:
    policy: str
    multiplier: float
    report: MetricsReport


@dataclass(frozen=True)
class TierRow:
    policy: str
    task_class: str
    local: float
    regional: float
    energy_oriented: float


@dataclass(frozen=True)
class AblationRow:
    friction_case: str
    capacity_regime: str
    mix_preset: str
    policy: str
    rid: float
    cost_reduction: float
    carbon_reduction: float


# ----------------------------------------------------------------------
# Scenario transforms for the sensitivity menu
# ----------------------------------------------------------------------

def apply_friction_case(cfg: ScenarioConfig, case: str) -> ScenarioConfig:
    """Swap every class's friction parameters for a named preset.

    off: all components zero. egress_only: only egress survives.
    state_cache_egress: replication dropped. high: every cost component
    of the baseline tripled (volumes scale; unit prices stay).
    """
    if case not in FRICTION_CASES:
        raise ValueError(f"unknown friction case {case!r}")

    def transform(fr: FrictionParams) -> FrictionParams:
        if case == "off":
            return FrictionParams(egress_price_per_gb=fr.egress_price_per_gb)
        if case == "egress_only":
            return FrictionParams(
                egress_gb_per_unit=fr.egress_gb_per_unit,
                egress_price_per_gb=fr.egress_price_per_gb,
            )
        if case == "state_cache_egress":
            return replace(fr, replica_cost_per_unit=0.0)
        return FrictionParams(
            state_cost_per_unit=fr.state_cost_per_unit * HIGH_FRICTION_FACTOR,
            cache_cost_per_unit=fr.cache_cost_per_unit * HIGH_FRICTION_FACTOR,
            egress_gb_per_unit=fr.egress_gb_per_unit * HIGH_FRICTION_FACTOR,
            egress_price_per_gb=fr.egress_price_per_gb,
            replica_cost_per_unit=fr.replica_cost_per_unit * HIGH_FRICTION_FACTOR,
        )

    classes = tuple(replace(c, friction=transform(c.friction)) for c in cfg.classes)
    return replace(cfg, classes=classes)


def apply_capacity_regime(cfg: ScenarioConfig, regime: str) -> ScenarioConfig:
    """Scale every node's hourly capacity by the regime factor."""
    factor = CAPACITY_REGIMES[regime]
    nodes = tuple(
        replace(n, capacity_series=tuple(v * factor for v in n.capacity_series))
        for n in cfg.nodes
    )
    return replace(cfg, nodes=nodes)


def apply_mix_preset(cfg: ScenarioConfig, preset: str) -> ScenarioConfig:
    """Shift workload mass between interactive (A) and batch (D) classes."""
    if preset not in MIX_PRESETS:
        raise ValueError(f"unknown mix preset {preset!r}")
    mix = dict(cfg.class_mix)
    if preset == "interactive_heavy":
        shift = min(MIX_SHIFT, mix.get("D", 0.0))
        mix["A"] = mix.get("A", 0.0) + shift
        mix["D"] = mix.get("D", 0.0) - shift
    elif preset == "batch_heavy":
        shift = min(MIX_SHIFT, mix.get("A", 0.0))
        mix["A"] = mix.get("A", 0.0) - shift
        mix["D"] = mix.get("D", 0.0) + shift
    return replace(cfg, class_mix=mix)


# ----------------------------------------------------------------------
# Stages
# ----------------------------------------------------------------------

def _run_jobs(jobs: dict, threads: int) -> dict:
    """Run keyed zero-argument jobs, optionally on a thread pool.

    The result mapping is keyed identically regardless of execution
    order, which keeps downstream output byte-stable for any thread
    count.
    """
    if threads <= 1:
        return {key: job() for key, job in jobs.items()}
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {key: pool.submit(job) for key, job in jobs.items()}
        return {key: future.result() for key, future in futures.items()}


def latency_sweep(cfg: ScenarioConfig, spec: SweepSpec, threads: int = 1) -> list[SweepCell]:
    """Stage 1: run every (multiplier, policy) cell of the frontier.

    Reductions inside each report are taken against the Local-Only run
    at the same multiplier, which is added to the grid if the spec does
    not request it.
    """
    policies = tuple(dict.fromkeys(("local_only",) + tuple(spec.policies)))
    jobs = {
        (multiplier, policy): (
            lambda m=multiplier, p=policy: run_horizon(cfg.with_multiplier(m), Policy(p))
        )
        for multiplier in spec.multipliers
        for policy in policies
    }
    traces: dict[tuple[float, str], Trace] = _run_jobs(jobs, threads)

    cells = []
    for multiplier in spec.multipliers:
        baseline = totals(traces[(multiplier, "local_only")])
        for policy in spec.policies:
            scenario = cfg.with_multiplier(multiplier)
            report = build_report(traces[(multiplier, policy)], scenario, baseline)
            cells.append(SweepCell(policy=policy, multiplier=multiplier, report=report))
    cells.sort(key=lambda c: (c.multiplier, c.policy))
    return cells


def class_analysis(
    cfg: ScenarioConfig,
    multiplier: float,
    policies: tuple[str, ...] = POLICY_KINDS,
    threads: int = 1,
) -> list[TierRow]:
    """Stage 2: tier shares per class under each policy at one multiplier."""
    scenario = cfg.with_multiplier(multiplier)
    jobs = {
        policy: (lambda p=policy: run_horizon(scenario, Policy(p))) for policy in policies
    }
    traces = _run_jobs(jobs, threads)
    rows = []
    for policy in sorted(policies):
        shares = tier_shares(traces[policy], scenario.tier_thresholds)
        for class_id, split in sorted(shares.items()):
            rows.append(
                TierRow(
                    policy=policy,
                    task_class=class_id,
                    local=split["local"],
                    regional=split["regional"],
                    energy_oriented=split["energy_oriented"],
                )
            )
    return rows


def sensitivity(
    cfg: ScenarioConfig,
    spec: SweepSpec,
    policies: tuple[str, ...] = ("joint",),
    threads: int = 1,
) -> list[AblationRow]:
    """Stage 3: RID and reductions across the friction/capacity/mix menu.

    Every cell compares a policy run against Local-Only inside the same
    transformed scenario, at the scenario's own latency multiplier.
    """
    grid = [
        (case, regime, preset)
        for case in spec.friction_cases
        for regime in spec.capacity_regimes
        for preset in spec.mix_presets
    ]

    def cell_scenario(case: str, regime: str, preset: str) -> ScenarioConfig:
        return apply_mix_preset(
            apply_capacity_regime(apply_friction_case(cfg, case), regime), preset
        )

    jobs = {}
    for case, regime, preset in grid:
        scenario = cell_scenario(case, regime, preset)
        for policy in tuple(dict.fromkeys(("local_only",) + tuple(policies))):
            jobs[(case, regime, preset, policy)] = (
                lambda s=scenario, p=policy: run_horizon(s, Policy(p))
            )
    traces = _run_jobs(jobs, threads)

    rows = []
    for case, regime, preset in grid:
        baseline = totals(traces[(case, regime, preset, "local_only")])
        scenario = cell_scenario(case, regime, preset)
        for policy in policies:
            trace = traces[(case, regime, preset, policy)]
            own = totals(trace)
            rows.append(
                AblationRow(
                    friction_case=case,
                    capacity_regime=regime,
                    mix_preset=preset,
                    policy=policy,
                    rid=rid(trace, scenario),
                    cost_reduction=reduction(own.electricity_cost_usd, baseline.electricity_cost_usd),
                    carbon_reduction=reduction(own.carbon_g, baseline.carbon_g),
                )
            )
    return rows
