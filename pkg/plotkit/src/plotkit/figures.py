"""The three figure families: 3D trajectories, error profiles, control profiles.

Each function renders to a static image and returns the matplotlib Figure
(callers that only want the file can ignore it).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .frames import TraceFrame  # noqa: E402


def plot_trajectory_3d(
    traces: list[tuple[str, TraceFrame]], out: str | None
) -> "plt.Figure":
    """World-frame pursuer and target paths; circles mark the start points."""
    if not traces:
        raise ValueError("no traces given")
    fig = plt.figure(figsize=(7.5, 6.5))
    ax = fig.add_subplot(projection="3d")
    for label, frame in traces:
        xp, yp, zp = frame["xP"], frame["yP"], frame["zP"]
        xt, yt, zt = frame["xT"], frame["yT"], frame["zT"]
        suffix = f" ({label})" if len(traces) > 1 else ""
        (line,) = ax.plot(xp, yp, zp, lw=1.0, label="pursuer" + suffix)
        ax.plot(xt, yt, zt, lw=1.4, ls="--", label="target" + suffix)
        ax.scatter([xp[0]], [yp[0]], [zp[0]], marker="o", s=45,
                   color=line.get_color(), edgecolor="k", zorder=5)
        ax.scatter([xt[0]], [yt[0]], [zt[0]], marker="o", s=45,
                   facecolor="none", edgecolor="k", zorder=5)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_zlabel("z [m]")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    if out:
        fig.savefig(out, dpi=150)
    return fig


def plot_errors(
    frame: TraceFrame, metrics: dict[str, float], out: str | None
) -> "plt.Figure":
    """Range error with its shell bounds, and the speed error."""
    t = frame["t"]
    eps = frame["eps"]
    a, b = metrics["a"], metrics["b"]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7.0, 5.6), sharex=True)
    ax1.plot(t, eps, lw=1.2, label="range error")
    ax1.axhline(b, color="crimson", ls="--", lw=1.0, label=f"bounds (-{a:g}, {b:g})")
    ax1.axhline(-a, color="crimson", ls="--", lw=1.0)
    ax1.axhline(0.0, color="0.6", lw=0.6)
    ax1.set_ylabel("eps [m]")
    ax1.legend(loc="upper right", fontsize=8)

    v_d = metrics.get("V_d")
    if v_d is not None:
        ax2.plot(t, frame["VP"] - v_d, lw=1.2, color="tab:green")
        ax2.axhline(0.0, color="0.6", lw=0.6)
        ax2.set_ylabel("speed error [m/s]")
    else:
        ax2.plot(t, frame["VP"], lw=1.2, color="tab:green")
        ax2.set_ylabel("speed [m/s]")
    ax2.set_xlabel("t [s]")
    fig.tight_layout()
    if out:
        fig.savefig(out, dpi=150)
    return fig


def plot_controls(frame: TraceFrame, out: str | None) -> "plt.Figure":
    """The three acceleration commands; saturated samples highlighted."""
    t = frame["t"]
    fig, axes = plt.subplots(3, 1, figsize=(7.0, 6.4), sharex=True)
    sat = frame["saturated"] > 0.5
    for ax, col, label in zip(
        axes, ("a_r", "a_gamma", "a_chi"),
        ("radial [m/s^2]", "pitch lateral [m/s^2]", "yaw lateral [m/s^2]"),
    ):
        vals = frame[col]
        ax.plot(t, vals, lw=1.0)
        if np.any(sat):
            ax.plot(t[sat], vals[sat], ".", ms=2.5, color="crimson",
                    label="saturated steps")
        ax.axhline(0.0, color="0.6", lw=0.6)
        ax.set_ylabel(label)
    if np.any(sat):
        axes[0].legend(loc="upper right", fontsize=8)
    axes[-1].set_xlabel("t [s]")
    fig.tight_layout()
    if out:
        fig.savefig(out, dpi=150)
    return fig
