"""Offline figure rendering for engagement-simulator trace CSVs."""

from .figures import plot_controls, plot_errors, plot_trajectory_3d
from .frames import TRACE_COLUMNS, TraceFrame, load_metrics, load_trace

__version__ = "0.1.0"
