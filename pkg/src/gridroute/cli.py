"""Command-line interface.

Subcommands map one-to-one onto the library's run modes: `simulate` for
a single policy run, `sweep` for the latency frontier, `classes` for the
per-class tier table, `ablate` for the friction/capacity/mix grid,
`oracle-check` for greedy-versus-exact spot checks, and `validate` for
scenario linting. All result-producing commands write the CSV tables,
the run manifest, and (unless --no-plots) the matching figures.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from ._version import TOOL_VERSION
from .allocator import POLICY_KINDS, Policy, run_horizon
from .metrics import build_report, totals
from .model import ScenarioConfig, ScenarioError, ValidationFailure, validate_scenario
from .oracle import MAX_TASKS, exact_oracle, extract_instance, greedy_assign
from .report import render_figures
from .results import emit_results
from .scenario_io import load_scenario, loads_scenario
from .sweep import SweepCell, SweepSpec, class_analysis, latency_sweep, sensitivity

_SPEC_KEYS = {"multipliers", "policies", "friction_cases", "capacity_regimes", "mix_presets"}


def _resolve_scenario(value: str) -> ScenarioConfig:
    """Load a scenario file; the literal name `default` means the bundled one."""
    if value == "default":
        text = resources.files("gridroute").joinpath("data/default_scenario.json").read_text(encoding="utf-8")
        return loads_scenario(text, source="bundled default scenario")
    return load_scenario(value)


def _read_sweep_spec(path: str | None) -> SweepSpec:
    if path is None:
        return SweepSpec()
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ScenarioError(f"{path}: invalid JSON at line {err.lineno} column {err.colno}: {err.msg}") from err
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: sweep spec must be a JSON object")
    unknown = sorted(set(data) - _SPEC_KEYS)
    if unknown:
        raise ScenarioError(f"{path}: unknown sweep spec key(s) {', '.join(repr(k) for k in unknown)}")
    spec = SweepSpec()
    if "multipliers" in data:
        spec = replace(spec, multipliers=tuple(float(m) for m in data["multipliers"]))
    if "policies" in data:
        spec = replace(spec, policies=tuple(str(p) for p in data["policies"]))
    if "friction_cases" in data:
        spec = replace(spec, friction_cases=tuple(str(c) for c in data["friction_cases"]))
    if "capacity_regimes" in data:
        spec = replace(spec, capacity_regimes=tuple(str(r) for r in data["capacity_regimes"]))
    if "mix_presets" in data:
        spec = replace(spec, mix_presets=tuple(str(m) for m in data["mix_presets"]))
    return spec


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _resolve_scenario(args.scenario)
    if args.latency_multiplier is not None:
        cfg = cfg.with_multiplier(args.latency_multiplier)

    trace = run_horizon(cfg, Policy(args.policy))
    baseline = trace if args.policy == "local_only" else run_horizon(cfg, Policy("local_only"))
    report = build_report(trace, cfg, totals(baseline))
    cell = SweepCell(policy=args.policy, multiplier=cfg.latency_multiplier, report=report)

    tier_table = class_analysis(cfg, cfg.latency_multiplier, policies=(args.policy,))
    settings = {
        "command": "simulate",
        "policy": args.policy,
        "latency_multiplier": cfg.latency_multiplier,
    }
    written = emit_results(
        args.out, cfg, settings,
        cells=[cell], tier_table=tier_table, tier_multiplier=cfg.latency_multiplier,
    )
    if not args.no_plots:
        written += render_figures(
            args.out, cells=[cell], tier_table=tier_table, tier_multiplier=cfg.latency_multiplier,
        )
    _announce(written)
    print(
        f"simulate: policy={args.policy} multiplier={cfg.latency_multiplier:g} "
        f"rid={report.rid:.4f} cost_reduction={report.cost_reduction_vs_baseline:.4f} "
        f"violations={report.sla_violation_rate:.4f}"
    )
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _resolve_scenario(args.scenario)
    spec = _read_sweep_spec(args.spec)
    cells = latency_sweep(cfg, spec, threads=args.threads)
    settings = {
        "command": "sweep",
        "multipliers": list(spec.multipliers),
        "policies": sorted({c.policy for c in cells}),
    }
    written = emit_results(args.out, cfg, settings, cells=cells)
    if not args.no_plots:
        written += render_figures(args.out, cells=cells)
    _announce(written)
    return 0


def cmd_classes(args: argparse.Namespace) -> int:
    cfg = _resolve_scenario(args.scenario)
    tier_table = class_analysis(cfg, args.latency_multiplier, threads=args.threads)
    settings = {
        "command": "classes",
        "latency_multiplier": args.latency_multiplier,
        "policies": sorted({row.policy for row in tier_table}),
    }
    written = emit_results(
        args.out, cfg, settings, tier_table=tier_table, tier_multiplier=args.latency_multiplier,
    )
    if not args.no_plots:
        written += render_figures(args.out, tier_table=tier_table, tier_multiplier=args.latency_multiplier)
    _announce(written)
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    cfg = _resolve_scenario(args.scenario)
    spec = _read_sweep_spec(args.spec)
    rows = sensitivity(cfg, spec, threads=args.threads)
    settings = {
        "command": "ablate",
        "friction_cases": list(spec.friction_cases),
        "capacity_regimes": list(spec.capacity_regimes),
        "mix_presets": list(spec.mix_presets),
        "latency_multiplier": cfg.latency_multiplier,
    }
    written = emit_results(args.out, cfg, settings, ablation_table=rows)
    if not args.no_plots:
        written += render_figures(args.out, ablation_table=rows)
    _announce(written)
    return 0


def cmd_oracle_check(args: argparse.Namespace) -> int:
    cfg = _resolve_scenario(args.scenario)
    hours = min(args.hours, cfg.horizon_hours)
    agree = 0
    checked = 0
    max_gap = 0.0
    for hour in range(hours):
        instance = extract_instance(cfg, hour, max_tasks=args.max_tasks)
        if not instance.tasks:
            continue
        checked += 1
        exact = exact_oracle(instance)
        greedy = greedy_assign(instance)
        if not exact.feasible:
            if not greedy.feasible:
                agree += 1
            continue
        if greedy.feasible:
            gap = (greedy.objective - exact.objective) / exact.objective
            max_gap = max(max_gap, gap)
            if gap <= 1e-9:
                agree += 1
    if checked == 0:
        print("oracle-check: no non-empty instances extracted")
        return 0
    print(
        f"oracle-check: {checked} instances, agreement {agree}/{checked} "
        f"({100.0 * agree / checked:.1f}%), max relative gap {max_gap:.3e}"
    )
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    if args.scenario == "default":
        text = resources.files("gridroute").joinpath("data/default_scenario.json").read_text(encoding="utf-8")
        source = "bundled default scenario"
    else:
        text = Path(args.scenario).read_text(encoding="utf-8")
        source = args.scenario
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioError(f"{source}: invalid JSON at line {err.lineno} column {err.colno}: {err.msg}") from err
    if not isinstance(data, dict):
        raise ScenarioError(f"{source}: scenario document must be a JSON object")

    from .scenario_io import from_dict

    findings = validate_scenario(from_dict(data))
    if findings:
        raise ValidationFailure(findings)
    print(f"validate: {source} OK")
    return 0


def _announce(paths: Sequence[Path]) -> None:
    for path in paths:
        print(f"wrote {path}")


def _fail(args: argparse.Namespace | None, kind: str, message: str, findings: list[str] | None = None) -> int:
    if args is not None and getattr(args, "json_errors", False):
        payload: dict[str, Any] = {"error": kind, "message": message}
        if findings:
            payload["findings"] = findings
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    else:
        print(f"error ({kind}): {message}", file=sys.stderr)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridroute",
        description="Deterministic scenario simulator for latency-constrained geographic placement of inference workloads.",
    )
    parser.add_argument("--version", action="version", version=f"gridroute {TOOL_VERSION}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--scenario", required=True,
        help="scenario JSON file, or the literal name 'default' for the bundled ten-region scenario",
    )
    common.add_argument("--json-errors", action="store_true", help="emit errors as a JSON object on stderr")
    out_opts = argparse.ArgumentParser(add_help=False)
    out_opts.add_argument("--out", default="results", help="output directory (default: results)")
    out_opts.add_argument("--no-plots", action="store_true", help="skip PNG figure rendering")
    out_opts.add_argument("--threads", type=int, default=1, help="worker threads; results are identical for any value")

    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", parents=[common, out_opts], help="run one policy over the horizon")
    p_sim.add_argument("--policy", required=True, choices=POLICY_KINDS)
    p_sim.add_argument("--latency-multiplier", type=float, default=None, help="override the scenario's budget multiplier")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", parents=[common, out_opts], help="latency frontier across multipliers and policies")
    p_sweep.add_argument("--spec", default=None, help="JSON file overriding sweep multipliers/policies")
    p_sweep.set_defaults(func=cmd_sweep)

    p_classes = sub.add_parser("classes", parents=[common, out_opts], help="per-class tier shares at one multiplier")
    p_classes.add_argument("--latency-multiplier", type=float, required=True)
    p_classes.set_defaults(func=cmd_classes)

    p_ablate = sub.add_parser("ablate", parents=[common, out_opts], help="friction/capacity/mix sensitivity grid")
    p_ablate.add_argument("--spec", default=None, help="JSON file overriding the sensitivity grid")
    p_ablate.set_defaults(func=cmd_ablate)

    p_oracle = sub.add_parser("oracle-check", parents=[common], help="compare greedy assignment against the exact oracle")
    p_oracle.add_argument("--hours", type=int, default=24, help="number of scenario hours to check")
    p_oracle.add_argument("--max-tasks", type=int, default=MAX_TASKS, help=f"tasks per sub-instance (max {MAX_TASKS})")
    p_oracle.set_defaults(func=cmd_oracle_check)

    p_validate = sub.add_parser("validate", parents=[common], help="check a scenario file; exit 0 iff clean")
    p_validate.set_defaults(func=cmd_validate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationFailure as err:
        return _fail(args, "validation", str(err), findings=err.findings)
    except ScenarioError as err:
        return _fail(args, "scenario", str(err))
    except OSError as err:
        return _fail(args, "io", str(err))
    except ValueError as err:
        return _fail(args, "value", str(err))


if __name__ == "__main__":
    sys.exit(main())
