"""Deterministic scenario simulator for latency-constrained geographic
placement of AI inference workloads.

The library models a three-layer serving topology (clients, ingress
service nodes, compute nodes), prices each feasible placement by
electricity, carbon, delay, and migration friction, and allocates
hourly workload under per-node capacity. Everything is deterministic:
identical inputs give byte-identical outputs.
"""

from ._version import TOOL_VERSION
from .allocator import (
    POLICY_KINDS,
    AssignmentRecord,
    HourResult,
    Placement,
    Policy,
    Trace,
    allocate_hour,
    rank_nodes,
    run_horizon,
)
from .costs import DegenerateNormalizerError, UnitCost, local_unit_cost, net_benefit, unit_cost
from .feasibility import FeasibleSet, assert_monotone_expansion, feasible_set, is_feasible
from .latency import EARTH_RADIUS_KM, end_to_end_ms, great_circle_km, service_to_compute_ms
from .metrics import (
    FlowShare,
    MetricsReport,
    ReturnStep,
    TraceTotals,
    build_report,
    erl_crl,
    mean_service_to_compute_ms,
    migration_cost_share,
    reduction,
    rid,
    sla_violation_rate,
    tier_shares,
    top_flows,
    totals,
)
from .model import (
    CLASS_IDS,
    ComputeNode,
    FrictionParams,
    PolicyWeights,
    ScenarioConfig,
    ScenarioError,
    ServiceNode,
    TaskClass,
    TierThresholds,
    ValidationFailure,
    WorkloadSlice,
    effective_budget,
    hourly_slices,
    require_valid,
    validate_scenario,
)
from .oracle import (
    MAX_NODES,
    MAX_TASKS,
    OracleInstance,
    OracleSolution,
    OracleTask,
    exact_oracle,
    extract_instance,
    greedy_assign,
)
from .presets import build_default_scenario
from .results import emit_results
from .scenario_io import (
    dump_scenario,
    dumps_scenario,
    load_scenario,
    loads_scenario,
    scenario_hash,
)
from .sweep import (
    AblationRow,
    SweepCell,
    SweepSpec,
    TierRow,
    apply_capacity_regime,
    apply_friction_case,
    apply_mix_preset,
    class_analysis,
    latency_sweep,
    sensitivity,
)

__version__ = TOOL_VERSION

__all__ = [
    "TOOL_VERSION",
    "POLICY_KINDS",
    "AssignmentRecord",
    "HourResult",
    "Placement",
    "Policy",
    "Trace",
    "allocate_hour",
    "rank_nodes",
    "run_horizon",
    "DegenerateNormalizerError",
    "UnitCost",
    "local_unit_cost",
    "net_benefit",
    "unit_cost",
    "FeasibleSet",
    "assert_monotone_expansion",
    "feasible_set",
    "is_feasible",
    "EARTH_RADIUS_KM",
    "end_to_end_ms",
    "great_circle_km",
    "service_to_compute_ms",
    "FlowShare",
    "MetricsReport",
    "ReturnStep",
    "TraceTotals",
    "build_report",
    "erl_crl",
    "mean_service_to_compute_ms",
    "migration_cost_share",
    "reduction",
    "rid",
    "sla_violation_rate",
    "tier_shares",
    "top_flows",
    "totals",
    "CLASS_IDS",
    "ComputeNode",
    "FrictionParams",
    "PolicyWeights",
    "ScenarioConfig",
    "ScenarioError",
    "ServiceNode",
    "TaskClass",
    "TierThresholds",
    "ValidationFailure",
    "WorkloadSlice",
    "effective_budget",
    "hourly_slices",
    "require_valid",
    "validate_scenario",
    "MAX_NODES",
    "MAX_TASKS",
    "OracleInstance",
    "OracleSolution",
    "OracleTask",
    "exact_oracle",
    "extract_instance",
    "greedy_assign",
    "build_default_scenario",
    "emit_results",
    "dump_scenario",
    "dumps_scenario",
    "load_scenario",
    "loads_scenario",
    "scenario_hash",
    "AblationRow",
    "SweepCell",
    "SweepSpec",
    "TierRow",
    "apply_capacity_regime",
    "apply_friction_case",
    "apply_mix_preset",
    "class_analysis",
    "latency_sweep",
    "sensitivity",
]
