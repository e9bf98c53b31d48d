"""Render figures from simulator trace CSVs.

One subcommand per figure family plus `all`. Inputs are trace CSVs (and the
metrics JSON sidecar where bound lines are needed); outputs are PNG files in
the chosen directory.
"""

from __future__ import annotations

import argparse
import os
import sys

import matplotlib.pyplot as plt

from .figures import plot_controls, plot_errors, plot_trajectory_3d
from .frames import load_metrics, load_trace


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _out_path(out_dir: str, stem: str, family: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, f"{stem}_{family}.png")


def cmd_traj(args) -> int:
    traces = [(_stem(p), load_trace(p)) for p in args.trace]
    stem = _stem(args.trace[0]) if len(args.trace) == 1 else "overlay"
    out = _out_path(args.out, stem, "trajectory")
    fig = plot_trajectory_3d(traces, out)
    plt.close(fig)
    print(f"wrote {out}")
    return 0


def cmd_errors(args) -> int:
    frame = load_trace(args.trace[0])
    metrics = load_metrics(args.metrics)
    out = _out_path(args.out, _stem(args.trace[0]), "errors")
    fig = plot_errors(frame, metrics, out)
    plt.close(fig)
    print(f"wrote {out}")
    return 0


def cmd_controls(args) -> int:
    frame = load_trace(args.trace[0])
    out = _out_path(args.out, _stem(args.trace[0]), "controls")
    fig = plot_controls(frame, out)
    plt.close(fig)
    print(f"wrote {out}")
    return 0


def cmd_all(args) -> int:
    code = cmd_traj(args)
    code = cmd_errors(args) or code
    code = cmd_controls(args) or code
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit", description="figure rendering for engagement traces"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, metrics_required):
        p = sub.add_parser(name, help=help_)
        nargs = "+" if name == "traj" else 1
        p.add_argument("--trace", nargs=nargs, required=True,
                       help="trace CSV path(s)")
        if metrics_required:
            p.add_argument("--metrics", required=True,
                           help="metrics JSON sidecar (bound lines, set speed)")
        p.add_argument("--out", required=True, help="output directory")
        p.set_defaults(fn=fn)
        return p

    add("traj", cmd_traj, "3D pursuer/target trajectories", False)
    add("errors", cmd_errors, "range and speed error profiles with bounds", True)
    add("controls", cmd_controls, "acceleration command profiles", False)
    add("all", cmd_all, "all three figure families for one trace", True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
