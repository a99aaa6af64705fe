"""Convergence-curve data files and SVG charts."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..objective import TrialResult  # noqa: E402
from .io import fmt  # noqa: E402
from .runner import SummarySeries  # noqa: E402

plt.rcParams.update(
    {
        "svg.hashsalt": "bbo",
        "font.size": 9,
        "axes.labelsize": 9,
        "legend.fontsize": 8,
        "xtick.labelsize": 8,
        "ytick.labelsize": 8,
        "figure.figsize": (4.5, 3.2),
    }
)

COLORS = {"gp-ei": "tab:blue", "ref-gp-ei": "tab:red", "soo": "tab:green", "bamsoo": "tab:purple"}


def _group(series: list[SummarySeries]) -> dict[str, list[SummarySeries]]:
    out: dict[str, list[SummarySeries]] = {}
    for s in series:
        out.setdefault(s.problem, []).append(s)
    return out


def _padded(values: np.ndarray, n: int) -> np.ndarray:
    if values.size >= n:
        return values[:n]
    return np.concatenate([values, np.full(n - values.size, values[-1])])


def _save(fig, path: Path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_curves(problem: str, series: list[SummarySeries]):
    """Mean best-so-far per method with a shaded +/- 1 standard-error band."""
    fig, ax = plt.subplots()
    lo, hi = np.inf, -np.inf
    for s in series:
        color = COLORS.get(s.method)
        ax.plot(s.eval_index, s.mean, label=s.method, color=color, lw=1.2)
        ax.fill_between(s.eval_index, s.mean - s.stderr, s.mean + s.stderr, color=color, alpha=0.25, lw=0)
        lo = min(lo, float(np.min(s.mean - s.stderr)))
        hi = max(hi, float(np.max(s.mean + s.stderr)))
    pad = 0.05 * (hi - lo) if hi > lo else max(abs(hi), 1.0) * 0.05
    ax.set_ylim(lo - pad, hi + pad)
    ax.set_xlim(1, max(int(s.eval_index[-1]) for s in series))
    ax.set_xlabel("number of evaluations")
    ax.set_ylabel("best value (mean ± 1 SE)")
    ax.set_title(problem)
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def emit_curves(series: list[SummarySeries], out_dir) -> list[Path]:
    """Write ``curves_<problem>.dat`` and ``curves_<problem>.svg`` per problem.

    Data files are whitespace-delimited: ``eval_index`` then one
    ``mean_<method> stderr_<method>`` pair per method; lines starting with
    ``#`` are headers.
    """
    if not series:
        raise ValueError("no summary series to plot")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for problem, group in _group(series).items():
        n = max(s.eval_index.size for s in group)
        cols = [np.arange(1, n + 1)]
        header = ["eval_index"]
        for s in group:
            cols += [_padded(s.mean, n), _padded(s.stderr, n)]
            header += [f"mean_{s.method}", f"stderr_{s.method}"]
        path = out_dir / f"curves_{problem}.dat"
        with open(path, "w") as fh:
            fh.write(f"# {problem}: mean and standard error of best-so-far\n")
            fh.write("# " + " ".join(header) + "\n")
            for i in range(n):
                fh.write(" ".join([str(int(cols[0][i]))] + [fmt(c[i]) for c in cols[1:]]) + "\n")
        written.append(path)
        svg = out_dir / f"curves_{problem}.svg"
        _save(plot_curves(problem, group), svg)
        written.append(svg)
    return written


def emit_traces(results: list[TrialResult], out_dir) -> list[Path]:
    """Per problem, the raw evaluation values of the first trial of every
    method (``trace_<problem>.dat`` / ``.svg``).  The chart marks where the
    refinement phase of ``ref-gp-ei`` ends with a dotted line."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    first: dict[str, dict[str, TrialResult]] = {}
    for r in results:
        if r.error is None and r.records:
            first.setdefault(r.problem, {}).setdefault(r.method, r)
    written = []
    for problem, by_method in first.items():
        n = max(len(r.records) for r in by_method.values())
        path = out_dir / f"trace_{problem}.dat"
        with open(path, "w") as fh:
            fh.write(f"# {problem}: evaluation values of one trial per method (nan past the end)\n")
            fh.write("# eval_index " + " ".join(f"y_{m}" for m in by_method) + "\n")
            for i in range(n):
                vals = [fmt(r.records[i].y) if i < len(r.records) else "nan" for r in by_method.values()]
                fh.write(" ".join([str(i + 1)] + vals) + "\n")
        written.append(path)

        fig, ax = plt.subplots()
        for m, r in by_method.items():
            idx = [rec.index for rec in r.records]
            ax.plot(idx, [rec.y for rec in r.records], ".", ms=3, label=m, color=COLORS.get(m))
            n_ref = sum(rec.phase == "refine" for rec in r.records)
            if n_ref:
                ax.axvline(n_ref + 0.5, color="black", ls=":", lw=1)
        ax.set_xlabel("number of evaluations")
        ax.set_ylabel("evaluation value")
        ax.set_title(f"{problem} (one trial)")
        ax.legend(frameon=False)
        fig.tight_layout()
        svg = out_dir / f"trace_{problem}.svg"
        _save(fig, svg)
        written.append(svg)
    return written
