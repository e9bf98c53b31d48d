"""Trace CSV ingestion.

plotkit talks to the simulator only through its documented file formats: the
trace CSV schema below and the flat JSON metrics sidecar. Nothing here
recomputes guidance quantities; plots draw logged columns as they are.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

TRACE_COLUMNS = (
    "t,xP,yP,zP,xT,yT,zT,r,theta,psi,VP,gammaP,chiP,"
    "eps,z,alpha,U,a_r,a_gamma,a_chi,Delta,V1,V2,in_barrier,saturated"
).split(",")


@dataclass(frozen=True)
class TraceFrame:
    """In-memory table of one trace CSV."""

    columns: dict[str, np.ndarray]
    path: str

    def __getitem__(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise KeyError(f"trace {self.path!r} has no column {name!r}")
        return self.columns[name]

    def __len__(self) -> int:
        return len(self.columns["t"])


def load_trace(path: str) -> TraceFrame:
    """Read and validate a trace CSV: exact column set, monotone time, rows present."""
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        names = header.split(",") if header else []
        missing = [c for c in TRACE_COLUMNS if c not in names]
        extra = [c for c in names if c not in TRACE_COLUMNS]
        if missing or extra:
            parts = []
            if missing:
                parts.append("missing columns: " + ", ".join(missing))
            if extra:
                parts.append("unexpected columns: " + ", ".join(extra))
            raise ValueError(f"trace {path!r} does not match the schema ({'; '.join(parts)})")
        body = fh.read()
        if not body.strip():
            raise ValueError(f"trace {path!r} is empty (header only); nothing to plot")
        try:
            data = np.loadtxt(body.splitlines(), delimiter=",", ndmin=2)
        except ValueError as exc:
            raise ValueError(f"trace {path!r} has malformed rows: {exc}") from exc
    if data.shape[1] != len(TRACE_COLUMNS):
        raise ValueError(f"trace {path!r} rows have {data.shape[1]} fields, expected {len(TRACE_COLUMNS)}")
    cols = {name: data[:, i] for i, name in enumerate(names)}
    t = cols["t"]
    if len(t) > 1 and not np.all(np.diff(t) > 0):
        raise ValueError(f"trace {path!r} time column is not strictly increasing")
    return TraceFrame(columns=cols, path=path)


def load_metrics(path: str) -> dict[str, float]:
    """Read the flat key->number metrics sidecar."""
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError(f"metrics {path!r} is not a flat map")
    return {str(k): float(v) for k, v in doc.items()}
