"""CSV and JSON persistence for trial traces and summaries."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..objective import EvaluationRecord, TrialResult
from .runner import SummarySeries

SUMMARY_COLUMNS = ["method", "problem", "eval_index", "mean_best", "stderr_best", "n_trials"]


def fmt(v: float) -> str:
    # 17 significant digits round-trip every double exactly
    return format(float(v), ".17g")


def result_columns(d: int) -> list[str]:
    return ["method", "problem", "trial", "seed", "eval_index", "phase"] + [f"x_{i}" for i in range(1, d + 1)] + [
        "y",
        "best_so_far",
    ]


def _dimension(results) -> int:
    dims = {r.records[0].x.size for r in results if r.records}
    if len(dims) > 1:
        raise ValueError(f"results mix dimensions {sorted(dims)}; write one file per problem")
    return dims.pop() if dims else 0


def _open_for_write(path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return open(path, "w", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def write_results(results: list[TrialResult], path) -> Path:
    d = _dimension(results)
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(result_columns(d))
        for r in results:
            for rec in r.records:
                w.writerow(
                    [r.method, r.problem, r.trial, r.seed, rec.index, rec.phase]
                    + [fmt(v) for v in rec.x]
                    + [fmt(rec.y), fmt(rec.best_so_far)]
                )
    return Path(path)


def read_results(path) -> list[TrialResult]:
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    out: dict[tuple, TrialResult] = {}
    with fh:
        reader = csv.DictReader(fh)
        xcols = [c for c in reader.fieldnames or [] if c.startswith("x_")]
        for row in reader:
            key = (row["method"], row["problem"], int(row["trial"]), int(row["seed"]))
            if key not in out:
                out[key] = TrialResult(key[0], key[1], key[3], [], trial=key[2])
            x = np.array([float(row[c]) for c in xcols])
            out[key].records.append(
                EvaluationRecord(int(row["eval_index"]), x, float(row["y"]), float(row["best_so_far"]), row["phase"])
            )
    return list(out.values())


def write_summary(series: list[SummarySeries], path) -> Path:
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for s in series:
            for i, m, e in zip(s.eval_index, s.mean, s.stderr):
                w.writerow([s.method, s.problem, int(i), fmt(m), fmt(e), s.n_trials])
    return Path(path)


def write_metadata(meta: dict, path) -> Path:
    with _open_for_write(path) as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return Path(path)


def run_metadata(results: list[TrialResult], config: dict) -> dict:
    """Run configuration plus per-trial details (refinement K, failures)."""
    trials = []
    for r in results:
        entry = {"method": r.method, "problem": r.problem, "trial": r.trial, "seed": r.seed,
                 "n_evaluations": len(r.records)}
        if r.error:
            entry["error"] = r.error
        for key in ("K", "gamma", "b_ref", "refine_cost", "dimension_order", "subspace_lower",
                    "subspace_upper", "random_fallbacks", "duplicate_replacements", "skipped",
                    "gp_failures", "expansions"):
            if key in r.info:
                entry[key] = r.info[key]
        trials.append(entry)
    return {
        "config": config,
        "gamma_constants": [config.get("gamma_c1"), config.get("gamma_c2")],
        "seeds": sorted({r.seed for r in results}),
        "failures": [t for t in trials if "error" in t],
        "trials": trials,
    }
