"""Low-budget Bayesian optimization with search-space refinement."""

from .bo import BoConfig, run_gp_ei, run_ref_gp_ei
from .objective import BudgetedEvaluator, BudgetExhausted, Problem, TrialResult, benchmark_value, get_problem
from .partition import run_bamsoo, run_soo
from .refine import plan_refinement, refine_search_space
from .space import SearchSpace

__version__ = "0.1.0"

__all__ = [
    "BoConfig",
    "BudgetExhausted",
    "BudgetedEvaluator",
    "Problem",
    "SearchSpace",
    "TrialResult",
    "benchmark_value",
    "get_problem",
    "plan_refinement",
    "refine_search_space",
    "run_bamsoo",
    "run_gp_ei",
    "run_ref_gp_ei",
    "run_soo",
]
