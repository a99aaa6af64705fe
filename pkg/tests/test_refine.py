import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bbo.objective import BudgetedEvaluator, Problem, get_problem
from bbo.refine import (
    division_number,
    plan_refinement,
    refine_cost,
    refine_cost_even,
    refine_ratio,
    refine_search_space,
)
from bbo.space import SearchSpace, center, contains


def oracle_plan(B, d):
    """Independent evaluation: search every odd K up to B."""
    gamma = 0.59 * math.exp(-0.033 * B / d)
    fits = [K for K in range(3, B + 2, 2) if K + (d - 1) * (K - 1) <= gamma * B]
    K = max(fits, default=1)
    return gamma, gamma * B, K, (K + (d - 1) * (K - 1)) if K > 1 else 0


@pytest.mark.parametrize(
    "B,d,gamma,K,cost",
    [(50, 5, 0.424165, 5, 21), (20, 4, 0.500257, 3, 9), (20, 2, None, 3, 5)],
)
def test_plan_reference_values(B, d, gamma, K, cost):
    plan = plan_refinement(B, d)
    if gamma is not None:
        assert plan.gamma == pytest.approx(gamma, abs=1e-6)
    assert (plan.K, plan.cost) == (K, cost)


def test_plan_b_ref_for_sphere_budget():
    assert plan_refinement(50, 5).b_ref == pytest.approx(21.208, abs=1e-3)


@given(st.integers(1, 400), st.integers(1, 12))
def test_plan_matches_brute_force(B, d):
    plan = plan_refinement(B, d)
    gamma, b_ref, K, cost = oracle_plan(B, d)
    assert plan.gamma == pytest.approx(gamma, rel=1e-14)
    assert (plan.K, plan.cost) == (K, cost)
    assert plan.cost <= plan.b_ref


def test_ratio_decreases_with_budget():
    vals = [refine_ratio(B, 3) for B in range(1, 200)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_costs():
    assert refine_cost(5, 5) == 21
    assert refine_cost(3, 1) == 3
    assert refine_cost_even(4, 3) == 12
    with pytest.raises(ValueError):
        refine_cost(4, 2)
    assert division_number(2.9, 4) == 1


def _run(problem, K, seed):
    d = problem.dim
    ev = BudgetedEvaluator(problem, 10_000, phase="refine")
    out = refine_search_space(ev, problem.space, refine_cost(K, d), np.random.default_rng(seed))
    return ev, out


@pytest.mark.parametrize("seed", range(20))
def test_sphere_trace(seed):
    sphere = get_problem("sphere")
    ev, out = _run(sphere, 5, seed)
    assert out.K == 5
    assert out.subspace == SearchSpace.cube(-2.0, 1.0, 5)
    np.testing.assert_array_equal(center(out.subspace), np.full(5, -0.5))
    assert out.center_value == 1.25
    assert len(ev.log) == 21 == len(out.evaluations)
    assert out.subspace.volume == pytest.approx(sphere.space.volume / 5**5, rel=1e-12)
    assert sorted(out.dimension_order) == list(range(5))


def test_monotone_objective_picks_corner():
    p = Problem("plane", SearchSpace.cube(0.0, 3.0, 2), lambda x: float(x[0] + x[1]))
    ev, out = _run(p, 3, 0)
    assert out.subspace == SearchSpace.cube(0.0, 1.0, 2)
    assert len(ev.log) == 5


def test_small_reference_budget_is_a_no_op():
    p = get_problem("branin")
    ev = BudgetedEvaluator(p, 10)
    out = refine_search_space(ev, p.space, 4.9, 0)
    assert out.subspace == p.space and out.evaluations == [] and ev.count == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 120), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_evaluation_count_matches_cost(B, d, seed):
    rng = np.random.default_rng(seed)
    offsets = rng.normal(size=d)
    p = Problem("quad", SearchSpace.cube(-1.0, 2.0, d), lambda x: float(np.sum((x - offsets) ** 2)))
    plan = plan_refinement(B, d)
    ev = BudgetedEvaluator(p, B)
    out = refine_search_space(ev, p.space, plan.b_ref, seed)
    assert ev.count == plan.cost
    if plan.K >= 3:
        assert out.subspace.volume == pytest.approx(p.space.volume / plan.K**d, rel=1e-9)
    else:
        assert out.subspace == p.space


def test_center_reuse_and_best_of_last_siblings():
    rng = np.random.default_rng(3)
    offsets = rng.random(4) * 3
    p = Problem("quad", SearchSpace.cube(-1.0, 2.0, 4), lambda x: float(np.sum((x - offsets) ** 2)))
    calls = []
    counted = Problem(p.name, p.space, lambda x: calls.append(np.array(x)) or p.objective(x))
    ev, out = _run(counted, 5, 7)
    pts = np.array(calls)
    # no point is ever evaluated twice
    assert len({tuple(x) for x in pts}) == len(pts) == refine_cost(5, 4)
    # the last axis' candidates: the kept centre is the minimum of them
    last = [r.y for r in ev.log[-4:]]
    assert out.center_value <= min(last)
    assert contains(out.subspace, center(out.subspace))


def test_reproducible():
    p = get_problem("hartmann6")
    runs = [_run(p, 3, 11) for _ in range(2)]
    (ev1, o1), (ev2, o2) = runs
    assert o1.dimension_order == o2.dimension_order and o1.subspace == o2.subspace
    assert [(r.x.tobytes(), r.y) for r in ev1.log] == [(r.x.tobytes(), r.y) for r in ev2.log]
