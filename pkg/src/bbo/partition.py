"""SOO and BaMSOO tree-search baselines.

Both grow a K-ary partition tree of the search space.  One sweep walks the
depths 0..min(tree depth, h_max(n)); at each depth the leaf with the lowest
g-value is expanded if it is no worse than every cell expanded earlier in
the sweep (``strict=True`` demands strictly better).  Children split the
cell along its longest side (in unit-cube terms) and the middle child
inherits its parent's centre and value.

The non-strict comparison matters on symmetric problems: on Sphere over
[-5, 10]^5 the first-level centres tie exactly, and the strict rule then
never descends below one split per axis within a 50-evaluation budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gp import MATERN52, KernelParams, NotPositiveDefinite, fit_surrogate
from .objective import BudgetedEvaluator, BudgetExhausted, Problem, TrialResult
from .space import SearchSpace, center, split_dimension

EVALUATED = "evaluated"
SURROGATE_BOUND = "surrogate_bound"
PENDING = "pending"  # child left unscored when the budget ran out


@dataclass(eq=False)
class Cell:
    space: SearchSpace
    center: np.ndarray
    depth: int
    g_value: float
    g_kind: str = EVALUATED
    index: int = 0


def split_axis(cell: SearchSpace, root: SearchSpace, ties: str = "first") -> int:
    """Longest side in unit-cube coordinates; ``ties`` picks the highest
    ("last") or lowest ("first") axis index among equally long sides."""
    rel = cell.widths / root.widths
    if ties == "first":
        return int(np.argmax(rel))
    return int(rel.size - 1 - np.argmax(rel[::-1]))


def default_hmax(n_expansions: int) -> int:
    return math.ceil(math.sqrt(n_expansions))


@dataclass
class PartitionTree:
    root: Cell
    leaves: dict[int, list[Cell]] = field(default_factory=dict)
    n_expansions: int = 0
    n_cells: int = 1
    expanded_values: list[list[float]] = field(default_factory=list)

    def __post_init__(self):
        self.leaves.setdefault(self.root.depth, []).append(self.root)

    @property
    def depth(self) -> int:
        return max((h for h, cells in self.leaves.items() if cells), default=0)

    def all_leaves(self) -> list[Cell]:
        return [c for h in sorted(self.leaves) for c in self.leaves[h]]

    def best_leaf(self, h: int) -> Cell | None:
        cells = self.leaves.get(h)
        if not cells:
            return None
        # min g, then lowest creation index
        return min(cells, key=lambda c: (c.g_value, c.index))


def _expand(tree: PartitionTree, cell: Cell, K: int, root_space: SearchSpace, score, axis_ties="first"):
    """Replace ``cell`` by its K children; ``score(x)`` returns (g, kind).

    Children are attached one at a time.  If ``score`` raises
    BudgetExhausted, the already-scored children stay and the rest are
    attached as PENDING cells with g = +inf, so the leaves still tile the
    root before the exception propagates.
    """
    tree.leaves[cell.depth].remove(cell)
    tree.n_expansions += 1
    axis = split_axis(cell.space, root_space, axis_ties)
    mid = (K - 1) // 2
    bucket = tree.leaves.setdefault(cell.depth + 1, [])
    exhausted = None
    for k, sub in enumerate(split_dimension(cell.space, axis, K)):
        if k == mid:
            child = Cell(sub, cell.center, cell.depth + 1, cell.g_value, cell.g_kind, tree.n_cells)
        elif exhausted is None:
            x = center(sub)
            try:
                g, kind = score(x)
            except BudgetExhausted as exc:
                exhausted = exc
                g, kind = math.inf, PENDING
            child = Cell(sub, x, cell.depth + 1, g, kind, tree.n_cells)
        else:
            child = Cell(sub, center(sub), cell.depth + 1, math.inf, PENDING, tree.n_cells)
        tree.n_cells += 1
        bucket.append(child)
    if exhausted is not None:
        raise exhausted


def _search(ev: BudgetedEvaluator, K: int, score, hmax=default_hmax, max_expansions=None, strict=False,
            axis_ties="first") -> PartitionTree:
    space = ev.problem.space
    x0 = center(space)
    root = Cell(space, x0, 0, ev.evaluate(x0), EVALUATED, 0)
    tree = PartitionTree(root)
    limit = max_expansions if max_expansions is not None else 100 * ev.budget
    try:
        while tree.n_expansions < limit:
            v_max = math.inf
            sweep = []
            h = 0
            while h <= min(tree.depth, hmax(tree.n_expansions)):
                cell = tree.best_leaf(h)
                if cell is not None and (cell.g_value < v_max if strict else cell.g_value <= v_max):
                    v_max = cell.g_value
                    sweep.append(cell.g_value)
                    _expand(tree, cell, K, space, score, axis_ties)
                h += 1
            if not sweep:
                # every leaf sits below h_max: expand the shallowest best one
                h = min(h for h, cells in tree.leaves.items() if cells)
                cell = tree.best_leaf(h)
                sweep.append(cell.g_value)
                _expand(tree, cell, K, space, score, axis_ties)
            tree.expanded_values.append(sweep)
    except BudgetExhausted:
        pass
    return tree


def run_soo(
    problem: Problem,
    budget: int,
    K: int = 3,
    seed: int = 0,
    hmax=default_hmax,
    strict: bool = False,
    axis_ties: str = "first",
) -> TrialResult:
    if K < 1 or K % 2 == 0:
        raise ValueError("SOO needs an odd division number")
    ev = BudgetedEvaluator(problem, budget, phase="tree")

    def score(x):
        return ev.evaluate(x), EVALUATED

    tree = _search(ev, K, score, hmax, strict=strict, axis_ties=axis_ties)
    info = {"K": K, "expansions": tree.n_expansions, "tree_depth": tree.depth}
    return TrialResult("soo", problem.name, seed, list(ev.log), info)


def bamsoo_beta(N: int, eta: float) -> float:
    return math.sqrt(2.0 * math.log(math.pi**2 * N**2 / (6.0 * eta)))


BAMSOO_INITIAL = KernelParams(MATERN52, 1.0, 0.25)


def run_bamsoo(
    problem: Problem,
    budget: int,
    K: int = 3,
    eta: float = 0.05,
    seed: int = 0,
    hmax=default_hmax,
    skipped_bound: str = "lower",
    max_expansions: int | None = None,
    strict: bool = False,
    axis_ties: str = "first",
) -> TrialResult:
    """SOO with GP-screened evaluations.

    Before a child centre is evaluated, a Matern-5/2 GP over the evaluated
    centres (unit-cube inputs, raw targets) gives ``mu +/- beta_N sigma``.
    If even the lower bound is worse than the incumbent, the child gets a
    bound as its g-value for free: the lower bound by default, or the upper
    bound with ``skipped_bound="upper"``.
    """
    if K < 1 or K % 2 == 0:
        raise ValueError("BaMSOO needs an odd division number")
    if skipped_bound not in ("lower", "upper"):
        raise ValueError("skipped_bound must be 'lower' or 'upper'")
    rng = np.random.default_rng(seed)
    ev = BudgetedEvaluator(problem, budget, phase="tree")
    space = problem.space
    state = {"model": None, "n_fit": 0}
    info = {"K": K, "eta": eta, "skipped": 0, "gp_failures": 0}

    def surrogate():
        if state["n_fit"] != ev.count:
            X = np.array([r.x for r in ev.log])
            y = np.array([r.y for r in ev.log])
            try:
                state["model"] = fit_surrogate(
                    space, X, y, MATERN52, rng, standardize=False, initial=BAMSOO_INITIAL
                )
            except NotPositiveDefinite:
                state["model"] = None
                info["gp_failures"] += 1
            state["n_fit"] = ev.count
        return state["model"]

    def score(x):
        model = surrogate()
        if model is not None:
            N = ev.count
            beta = bamsoo_beta(N, eta)
            mu, sd = model.predict(x[None, :])
            lower = float(mu[0] - beta * sd[0])
            f_best = ev.log[-1].best_so_far
            if lower > f_best:
                info["skipped"] += 1
                bound = lower if skipped_bound == "lower" else float(mu[0] + beta * sd[0])
                return bound, SURROGATE_BOUND
        return ev.evaluate(x), EVALUATED

    tree = _search(ev, K, score, hmax, max_expansions, strict, axis_ties)
    info.update(expansions=tree.n_expansions, tree_depth=tree.depth)
    return TrialResult("bamsoo", problem.name, seed, list(ev.log), info)
