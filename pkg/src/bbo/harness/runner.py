"""Experiment grids over (problem, method, trial) and their statistics."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ..bo import BoConfig, run_gp_ei, run_ref_gp_ei
from ..gp import SE
from ..objective import Problem, TrialResult, get_problem
from ..partition import run_bamsoo, run_soo
from ..refine import GAMMA_C1, GAMMA_C2

log = logging.getLogger(__name__)

METHODS = ("gp-ei", "ref-gp-ei", "soo", "bamsoo")


@dataclass(frozen=True)
class Settings:
    n_init: int = 5
    kernel: str = SE
    gamma_c1: float = GAMMA_C1
    gamma_c2: float = GAMMA_C2
    soo_k: int = 3
    eta: float = 0.05


def resolve_budget(rule, problem: Problem) -> int:
    """``rule`` is a positive int, or the string ``"10d"`` for ten evaluations per dimension."""
    if isinstance(rule, str):
        text = rule.strip().lower()
        if text.endswith("d"):
            factor = int(text[:-1] or 1)
            return factor * problem.dim
        rule = int(text)
    if rule < 1:
        raise ValueError(f"budget must be positive, got {rule}")
    return int(rule)


def run_trial(method: str, problem: Problem, budget: int, seed: int, settings: Settings = Settings()) -> TrialResult:
    if method in ("gp-ei", "ref-gp-ei"):
        config = BoConfig(
            n_init=settings.n_init,
            kernel_kind=settings.kernel,
            seed=seed,
            refine_enabled=method == "ref-gp-ei",
            gamma_override=(settings.gamma_c1, settings.gamma_c2),
        )
        fn = run_ref_gp_ei if config.refine_enabled else run_gp_ei
        return fn(problem, budget, config)
    if method == "soo":
        return run_soo(problem, budget, K=settings.soo_k, seed=seed)
    if method == "bamsoo":
        return run_bamsoo(problem, budget, K=settings.soo_k, eta=settings.eta, seed=seed)
    raise KeyError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def _run_cell(args) -> TrialResult:
    method, problem_name, budget_rule, trial, seed, settings = args
    problem = get_problem(problem_name)
    try:
        budget = resolve_budget(budget_rule, problem)
        result = run_trial(method, problem, budget, seed, settings)
    except Exception as exc:  # one failed cell must not sink the grid
        log.warning("%s on %s (seed %d) failed: %s", method, problem_name, seed, exc)
        result = TrialResult(method, problem.name, seed, [], error=f"{type(exc).__name__}: {exc}")
    result.trial = trial
    return result


def experiment_grid(methods, problems, trials: int, budget_rule="10d", base_seed: int = 0, settings=Settings()):
    if trials < 1:
        raise ValueError("need at least one trial")
    for m in methods:
        if m not in METHODS:
            raise KeyError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    names = [get_problem(p).name for p in problems]
    return [
        (m, p, budget_rule, t, base_seed + t, settings)
        for p in names
        for m in methods
        for t in range(trials)
    ]


def run_experiment(
    methods,
    problems,
    trials: int,
    budget_rule="10d",
    base_seed: int = 0,
    settings: Settings = Settings(),
    jobs: int = 1,
) -> list[TrialResult]:
    """Run every (problem, method, trial) cell with seed ``base_seed + trial``.

    Results come back in grid order whatever ``jobs`` is.
    """
    cells = experiment_grid(methods, problems, trials, budget_rule, base_seed, settings)
    if jobs <= 1:
        return [_run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_cell, cells))


@dataclass(frozen=True)
class SummarySeries:
    method: str
    problem: str
    eval_index: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    n_trials: int
    stderr_defined: bool = True


def summarize(results: list[TrialResult]) -> SummarySeries:
    """Mean and standard error (n - 1 sample std over sqrt(n)) of best-so-far
    at each evaluation index.  Traces shorter than the longest one carry
    their final best forward."""
    results = [r for r in results if r.error is None and r.records]
    if not results:
        raise ValueError("no successful trials to summarize")
    keys = {(r.method, r.problem) for r in results}
    if len(keys) != 1:
        raise ValueError(f"summarize expects one method/problem pair, got {sorted(keys)}")
    method, problem = keys.pop()
    length = max(len(r.records) for r in results)
    curves = np.empty((len(results), length))
    for i, r in enumerate(results):
        seq = r.best_sequence()
        curves[i, : seq.size] = seq
        curves[i, seq.size :] = seq[-1]
    n = len(results)
    mean = curves.mean(axis=0)
    if n >= 2:
        stderr = curves.std(axis=0, ddof=1) / math.sqrt(n)
    else:
        stderr = np.zeros(length)
    return SummarySeries(method, problem, np.arange(1, length + 1), mean, stderr, n, n >= 2)


def summarize_all(results: list[TrialResult]) -> list[SummarySeries]:
    groups: dict[tuple[str, str], list[TrialResult]] = {}
    for r in results:
        if r.error is None and r.records:
            groups.setdefault((r.problem, r.method), []).append(r)
    return [summarize(groups[k]) for k in groups]


def settings_dict(settings: Settings) -> dict:
    return asdict(settings)
