"""Trace CSV and metrics document serialization.

The trace schema is the stable external interface consumed by the plotting
tools: one row per guidance step, SI units, angles in radians, floats with 9
significant digits, flags as 0/1. Identical runs serialize byte-identically.
"""

from __future__ import annotations

import json
import math
import os

from .guidance import GuidanceParams
from .simulate import MetricsSummary, SimRecord, SimResult

TRACE_COLUMNS = (
    "t,xP,yP,zP,xT,yT,zT,r,theta,psi,VP,gammaP,chiP,"
    "eps,z,alpha,U,a_r,a_gamma,a_chi,Delta,V1,V2,in_barrier,saturated"
)


def _g9(x: float) -> str:
    return f"{x:.9g}"


def trace_row(rec: SimRecord) -> str:
    s, c = rec.state, rec.cmd
    vals = [
        rec.t,
        *rec.pos_P, *rec.pos_T,
        s.r, s.theta, s.psi, s.V_P, s.gamma_P, s.chi_P,
        c.epsilon, c.z, c.alpha, c.U, c.a_r, c.a_gamma, c.a_chi,
        rec.delta_true, c.V1, c.V2,
    ]
    flags = f"{1 if rec.in_barrier else 0},{1 if c.saturated else 0}"
    return ",".join(_g9(v) for v in vals) + "," + flags


def write_trace(records: list[SimRecord], path: str) -> None:
    """Write the trace CSV; an empty record list yields a header-only file."""
    try:
        with open(path, "w", newline="") as fh:
            fh.write(TRACE_COLUMNS + "\n")
            for rec in records:
                fh.write(trace_row(rec) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write trace to {path!r}: {exc}") from exc


def read_trace(path: str) -> dict[str, list[float]]:
    """Read a trace CSV back into columns; validates the header."""
    with open(path, newline="") as fh:
        header = fh.readline().rstrip("\n")
        if header != TRACE_COLUMNS:
            raise ValueError(f"unexpected trace header in {path!r}: {header!r}")
        cols: dict[str, list[float]] = {name: [] for name in TRACE_COLUMNS.split(",")}
        names = TRACE_COLUMNS.split(",")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(names):
                raise ValueError(f"malformed trace row in {path!r}: {line!r}")
            for name, part in zip(names, parts):
                cols[name].append(float(part))
    return cols


def metrics_document(result: SimResult) -> dict[str, float]:
    """Flat key -> number map: run metrics plus the parameters plots need."""
    m: MetricsSummary = result.metrics
    g: GuidanceParams = result.config.guidance
    doc = {
        "final_eps": m.final_eps,
        "max_abs_eps": m.max_abs_eps,
        "max_abs_eps_last20pct": m.max_abs_eps_last20pct,
        "eps_settling_time": m.eps_settling_time,
        "min_r": m.min_r,
        "max_r": m.max_r,
        "speed_settling_time": m.speed_settling_time,
        "lateral_effort": m.lateral_effort,
        "barrier_violations": float(m.barrier_violations),
        "saturation_duty": m.saturation_duty,
        "completed": 1.0 if m.completed else 0.0,
        "a": g.a,
        "b": g.b,
        "r_d": g.r_d,
        "V_d": g.V_d,
        "r_threat": g.r_threat,
        "r_connect": g.r_connect,
        "duration": result.config.duration,
        "dt_guidance": result.config.dt_guidance,
        "n_records": float(len(result.records)),
        "abort_time": result.aborted.t if result.aborted else -1.0,
    }
    return {k: (v if not math.isnan(v) else -1.0) for k, v in doc.items()}


def write_metrics(result: SimResult, path: str) -> None:
    doc = metrics_document(result)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
