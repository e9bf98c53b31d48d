"""Command-line driver: run scenarios, sweep parameters, verify properties.

Exit codes: 0 clean, 1 configuration/usage error, 2 safety abort (partial
outputs are still written).
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys

from .errors import ConfigError, Enclose3dError
from .scenario import (
    BUNDLED,
    ScenarioConfig,
    apply_key,
    resolve_scenario,
    serialize_config,
)
from .simulate import PerturbationSpec, monte_carlo, run_scenario
from .traceio import ensure_parent, write_metrics, write_trace
from .verify import SUITES, format_results, run_suite

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SAFETY = 2


def _load_with_overrides(scenario: str, overrides: list[str]) -> ScenarioConfig:
    config = resolve_scenario(scenario)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        config = apply_key(config, key.strip(), raw, where=" (--set)")
    return config.validate()


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config = _load_with_overrides(args.scenario, args.set or [])
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    result = run_scenario(config, validate=False)
    trace_path = args.out or config.trace_path or f"{config.name}_trace.csv"
    metrics_path = args.metrics or config.metrics_path or f"{config.name}_metrics.json"
    ensure_parent(trace_path)
    ensure_parent(metrics_path)
    write_trace(result.records, trace_path)
    write_metrics(result, metrics_path)
    print(f"wrote {trace_path} ({len(result.records)} records) and {metrics_path}")
    if result.aborted is not None:
        print(
            f"safety abort at t={result.aborted.t:.3f} s: {result.aborted.reason}",
            file=sys.stderr,
        )
        return EXIT_SAFETY
    m = result.metrics
    print(
        f"final eps {m.final_eps:.4f} m, max |eps| last 20% {m.max_abs_eps_last20pct:.4f} m, "
        f"r in [{m.min_r:.3f}, {m.max_r:.3f}] m, barrier violations {m.barrier_violations}"
    )
    return EXIT_OK


def _parse_grid(specs: list[str]) -> list[tuple[str, list[str]]]:
    axes = []
    for spec in specs:
        if "=" not in spec:
            raise ConfigError(f"--grid expects key=v1,v2,..., got {spec!r}")
        key, raw = spec.split("=", 1)
        values = [v.strip() for v in raw.split(",") if v.strip()]
        if not values:
            raise ConfigError(f"--grid axis {key!r} has no values")
        axes.append((key.strip(), values))
    return axes


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        config = _load_with_overrides(args.scenario, args.set or [])
        if bool(args.grid) == bool(args.mc):
            raise ConfigError("choose exactly one of --grid or --mc")
        os.makedirs(args.out, exist_ok=True)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    summary: dict = {"runs": []}
    any_abort = False

    if args.grid:
        try:
            axes = _parse_grid(args.grid)
            combos = list(itertools.product(*[vals for _, vals in axes]))
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        for i, combo in enumerate(combos):
            cfg = config
            try:
                for (key, _), value in zip(axes, combo):
                    cfg = apply_key(cfg, key, value)
                cfg.validate()
            except ConfigError as exc:
                print(f"error in grid point {i}: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            result = run_scenario(cfg, validate=False)
            stem = os.path.join(args.out, f"run_{i:03d}")
            write_trace(result.records, stem + "_trace.csv")
            write_metrics(result, stem + "_metrics.json")
            entry = {
                "index": i,
                "point": {key: value for (key, _), value in zip(axes, combo)},
                "final_eps": result.metrics.final_eps,
                "max_abs_eps": result.metrics.max_abs_eps,
                "barrier_violations": result.metrics.barrier_violations,
                "aborted": result.aborted.reason if result.aborted else None,
            }
            summary["runs"].append(entry)
            any_abort = any_abort or result.aborted is not None
        summary["kind"] = "grid"
    else:
        pert = PerturbationSpec(
            eps0_range=tuple(args.perturb_eps) if args.perturb_eps else None,
            angle_jitter=args.perturb_angles,
        )

        def persist(index, cfg, res):
            stem = os.path.join(args.out, f"mc_{index:03d}")
            write_trace(res.records, stem + "_trace.csv")
            write_metrics(res, stem + "_metrics.json")

        try:
            batch = monte_carlo(config, args.mc, pert, seed=args.seed, on_result=persist)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        for run in batch.runs:
            summary["runs"].append(
                {
                    "index": run.index,
                    "eps0": run.eps0,
                    "max_abs_eps": run.metrics.max_abs_eps,
                    "barrier_violations": run.metrics.barrier_violations,
                    "aborted": run.aborted,
                }
            )
            any_abort = any_abort or run.aborted is not None
        summary["kind"] = "monte-carlo"
        summary["seed"] = batch.seed
        summary["fraction_converged"] = batch.fraction_converged
        summary["worst_max_abs_eps"] = batch.worst_max_abs_eps
        summary["worst_min_r"] = batch.worst_min_r

    summary_path = os.path.join(args.out, "summary.json")
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {len(summary['runs'])} runs and {summary_path}")
    return EXIT_SAFETY if any_abort else EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    if any(n not in SUITES for n in names):
        print(
            f"error: unknown suite {args.suite!r}; available: {', '.join(SUITES)} or 'all'",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    failed = []
    for name in names:
        print(f"== suite {name} ==")
        results = run_suite(name)
        print(format_results(results))
        failed.extend(r.name for r in results if r.gating and not r.passed)
    if failed:
        print("failed criteria: " + "; ".join(failed), file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def cmd_show(args: argparse.Namespace) -> int:
    try:
        config = _load_with_overrides(args.scenario, args.set or [])
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(serialize_config(config))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enclose3d",
        description="3D target-enclosing guidance simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write trace + metrics")
    run.add_argument("--scenario", required=True,
                     help=f"bundled name ({', '.join(BUNDLED)}) or config file path")
    run.add_argument("--out", help="trace CSV path")
    run.add_argument("--metrics", help="metrics JSON path")
    run.add_argument("--set", action="append", metavar="KEY=VALUE",
                     help="override a config key (repeatable)")
    run.set_defaults(fn=cmd_run)

    sweep = sub.add_parser("sweep", help="grid or Monte Carlo batch of runs")
    sweep.add_argument("--scenario", required=True)
    sweep.add_argument("--grid", action="append", metavar="KEY=V1,V2,...",
                       help="sweep axis (repeatable; axes form a product)")
    sweep.add_argument("--mc", type=int, help="number of Monte Carlo runs")
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--perturb-eps", nargs=2, type=float, metavar=("LO", "HI"),
                       help="draw eps(0) uniformly from [LO, HI]")
    sweep.add_argument("--perturb-angles", type=float, default=0.0,
                       help="uniform jitter on initial pursuer angles (rad)")
    sweep.add_argument("--out", required=True, help="output directory")
    sweep.add_argument("--set", action="append", metavar="KEY=VALUE")
    sweep.set_defaults(fn=cmd_sweep)

    ver = sub.add_parser("verify", help="run a certification suite")
    ver.add_argument("--suite", default="all",
                     help=f"one of {', '.join(SUITES)} or 'all'")
    ver.set_defaults(fn=cmd_verify)

    show = sub.add_parser("show", help="print the resolved scenario config")
    show.add_argument("--scenario", required=True)
    show.add_argument("--set", action="append", metavar="KEY=VALUE")
    show.set_defaults(fn=cmd_show)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except Enclose3dError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
