from ..objective import TrialResult
from .io import read_results, run_metadata, write_metadata, write_results, write_summary
from .plotting import emit_curves, emit_traces, plot_curves
from .runner import (
    METHODS,
    Settings,
    SummarySeries,
    experiment_grid,
    resolve_budget,
    run_experiment,
    run_trial,
    summarize,
    summarize_all,
)

__all__ = [
    "METHODS",
    "Settings",
    "SummarySeries",
    "TrialResult",
    "emit_curves",
    "emit_traces",
    "experiment_grid",
    "plot_curves",
    "read_results",
    "resolve_budget",
    "run_experiment",
    "run_metadata",
    "run_trial",
    "summarize",
    "summarize_all",
    "write_metadata",
    "write_results",
    "write_summary",
]
