"""Search-space refinement run ahead of Bayesian optimization.

A fraction ``gamma = c1 * exp(-c2 * B / d)`` of the total budget caps the
refinement spend.  The division number K is the largest odd integer whose
cost ``K + (d - 1)(K - 1)`` fits under that cap.  Then, axis by axis in a
random order, the current region is cut into K equal slabs and the slab
whose centre scores lowest is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .objective import BudgetedEvaluator, EvaluationRecord
from .space import SearchSpace, center, split_dimension

GAMMA_C1 = 0.59
GAMMA_C2 = 0.033


def refine_ratio(B: int, d: int, c1: float = GAMMA_C1, c2: float = GAMMA_C2) -> float:
    if B < 1 or d < 1:
        raise ValueError("budget and dimension must be positive")
    return c1 * math.exp(-c2 * B / d)


def refine_cost(K: int, d: int) -> int:
    """Evaluations spent by an odd-K refinement: the middle slab of every axis
    after the first reuses the centre already evaluated."""
    if K < 1 or K % 2 == 0:
        raise ValueError(f"division number must be a positive odd integer, got {K}")
    return K + (d - 1) * (K - 1)


def refine_cost_even(K: int, d: int) -> int:
    # No centre is shared between consecutive axes when K is even.
    # Kept for reference; division_number never selects an even K.
    return d * K


def division_number(b_ref: float, d: int) -> int:
    """Largest odd K with ``refine_cost(K, d) <= b_ref``; 1 if K = 3 does not fit."""
    if d < 1:
        raise ValueError("dimension must be positive")
    K = 1
    while refine_cost(K + 2, d) <= b_ref:
        K += 2
    return K


@dataclass(frozen=True)
class RefinePlan:
    gamma: float
    b_ref: float
    K: int
    cost: int

    @property
    def active(self) -> bool:
        return self.K >= 3


def plan_refinement(B: int, d: int, c1: float = GAMMA_C1, c2: float = GAMMA_C2) -> RefinePlan:
    gamma = refine_ratio(B, d, c1, c2)
    b_ref = gamma * B
    K = division_number(b_ref, d)
    cost = refine_cost(K, d) if K >= 3 else 0
    return RefinePlan(gamma, b_ref, K, cost)


@dataclass(frozen=True)
class RefineOutcome:
    subspace: SearchSpace
    evaluations: list[EvaluationRecord]
    dimension_order: tuple[int, ...]
    K: int
    center_value: float | None = None


def refine_search_space(ev: BudgetedEvaluator, space: SearchSpace, b_ref: float, rng) -> RefineOutcome:
    d = space.dim
    K = division_number(b_ref, d)
    if K <= 1:
        return RefineOutcome(space, [], (), K)
    rng = np.random.default_rng(rng)
    order = tuple(int(i) for i in rng.permutation(d))
    start = ev.count
    mid = (K - 1) // 2

    region = space
    current_x = None
    current_y = None
    for step, axis in enumerate(order):
        children = split_dimension(region, axis, K)
        values = []
        points = []
        for k, child in enumerate(children):
            if step > 0 and k == mid:
                # same point as the current region's centre, already paid for
                points.append(current_x)
                values.append(current_y)
                continue
            x = center(region) if current_x is None else current_x.copy()
            x[axis] = center(child)[axis]
            points.append(x)
            values.append(ev.evaluate(x))
        best = int(np.argmin(values))  # first index on ties
        region = children[best]
        current_x, current_y = points[best], values[best]

    return RefineOutcome(region, list(ev.log[start:]), order, K, current_y)
