"""GP-EI Bayesian optimization, with and without search-space refinement."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .acquisition import AcquisitionQuery, maximize_acquisition
from .gp import SE, NotPositiveDefinite, fit_surrogate
from .objective import BudgetedEvaluator, BudgetExhausted, Problem, TrialResult
from .refine import GAMMA_C1, GAMMA_C2, plan_refinement, refine_search_space
from .space import SearchSpace, contains, to_unit

log = logging.getLogger(__name__)

DUPLICATE_TOL = 1e-10


@dataclass(frozen=True)
class BoConfig:
    n_init: int = 5
    kernel_kind: str = SE
    seed: int = 0
    refine_enabled: bool = False
    gamma_override: tuple[float, float] | None = None

    def __post_init__(self):
        if self.n_init < 1:
            raise ValueError("n_init must be at least 1")

    @property
    def gamma_constants(self) -> tuple[float, float]:
        return self.gamma_override or (GAMMA_C1, GAMMA_C2)


def latin_hypercube(space: SearchSpace, n: int, rng) -> np.ndarray:
    unit = qmc.LatinHypercube(d=space.dim, rng=rng).random(n)
    return space.lower + unit * space.widths


def _is_duplicate(space, x, X) -> bool:
    if not len(X):
        return False
    U = to_unit(space, np.asarray(X))
    u = to_unit(space, x)
    return bool(np.any(np.max(np.abs(U - u), axis=1) <= DUPLICATE_TOL))


def _bo_loop(ev: BudgetedEvaluator, space: SearchSpace, X: list, y: list, config: BoConfig, rng, info: dict):
    """Spend the remaining budget of ``ev`` on GP-EI proposals inside ``space``.

    ``X``/``y`` seed the surrogate dataset and are extended in place.
    """
    remaining = ev.remaining
    n_init = max(1, min(config.n_init, remaining - 1))
    ev.phase = "init"
    for x in latin_hypercube(space, min(n_init, remaining), rng):
        X.append(x)
        y.append(ev.evaluate(x))

    ev.phase = "bo"
    while ev.remaining > 0:
        try:
            model = fit_surrogate(space, np.array(X), np.array(y), config.kernel_kind, rng)
            query = AcquisitionQuery(float(min(y)), model, space)
            x = maximize_acquisition(query, rng)
        except NotPositiveDefinite:
            info.setdefault("random_fallbacks", []).append(ev.count + 1)
            x = space.lower + space.widths * rng.random(space.dim)
        if _is_duplicate(space, x, X):
            info.setdefault("duplicate_replacements", []).append(ev.count + 1)
            x = space.lower + space.widths * rng.random(space.dim)
        X.append(x)
        y.append(ev.evaluate(x))


def run_gp_ei(problem: Problem, budget: int, config: BoConfig = BoConfig()) -> TrialResult:
    if config.refine_enabled:
        return run_ref_gp_ei(problem, budget, config)
    rng = np.random.default_rng(config.seed)
    ev = BudgetedEvaluator(problem, budget)
    info: dict = {}
    try:
        _bo_loop(ev, problem.space, [], [], config, rng, info)
    except BudgetExhausted:
        pass
    return TrialResult("gp-ei", problem.name, config.seed, list(ev.log), info)


def run_ref_gp_ei(problem: Problem, budget: int, config: BoConfig = BoConfig()) -> TrialResult:
    if budget < 3:
        raise ValueError("ref-gp-ei needs a budget of at least 3")
    rng = np.random.default_rng(config.seed)
    ev = BudgetedEvaluator(problem, budget)
    c1, c2 = config.gamma_constants
    plan = plan_refinement(budget, problem.dim, c1, c2)
    ev.phase = "refine"
    outcome = refine_search_space(ev, problem.space, plan.b_ref, rng)
    sub = outcome.subspace
    info = {
        "gamma": plan.gamma,
        "b_ref": plan.b_ref,
        "K": plan.K,
        "refine_cost": len(outcome.evaluations),
        "dimension_order": list(outcome.dimension_order),
        "subspace_lower": sub.lower.tolist(),
        "subspace_upper": sub.upper.tolist(),
    }
    # refinement points that landed inside the kept region join the dataset
    X = [r.x for r in outcome.evaluations if contains(sub, r.x)]
    y = [r.y for r in outcome.evaluations if contains(sub, r.x)]
    try:
        _bo_loop(ev, sub, X, y, config, rng, info)
    except BudgetExhausted:
        pass
    return TrialResult("ref-gp-ei", problem.name, config.seed, list(ev.log), info)
