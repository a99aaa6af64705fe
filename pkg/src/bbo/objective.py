"""Benchmark problems and budget-enforced evaluation.

All problems are posed for minimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .space import OutOfBounds, SearchSpace, as_point, contains


class BudgetExhausted(RuntimeError):
    """Raised when an evaluation is requested after the budget is spent."""


class UnknownProblem(KeyError):
    pass


# Coefficients for Branin, Shekel and Hartmann follow the Surjanovic & Bingham
# "Virtual Library of Simulation Experiments" test-function pages.
BRANIN_A = 1.0
BRANIN_B = 5.1 / (4.0 * math.pi**2)
BRANIN_C = 5.0 / math.pi
BRANIN_R = 6.0
BRANIN_S = 10.0
BRANIN_T = 1.0 / (8.0 * math.pi)

# rows are the m = 5 centres, columns the 4 coordinates
SHEKEL_C = np.array(
    [
        [4.0, 4.0, 4.0, 4.0],
        [1.0, 1.0, 1.0, 1.0],
        [8.0, 8.0, 8.0, 8.0],
        [6.0, 6.0, 6.0, 6.0],
        [3.0, 7.0, 3.0, 7.0],
    ]
)
SHEKEL_BETA = 0.1 * np.array([1.0, 2.0, 2.0, 4.0, 4.0])

HARTMANN6_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
HARTMANN6_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
HARTMANN6_P = 1e-4 * np.array(
    [
        [1312.0, 1696.0, 5569.0, 124.0, 8283.0, 5886.0],
        [2329.0, 4135.0, 8307.0, 3736.0, 1004.0, 9991.0],
        [2348.0, 1451.0, 3522.0, 2883.0, 3047.0, 6650.0],
        [4047.0, 8828.0, 8732.0, 5743.0, 1091.0, 381.0],
    ]
)


# Each function accepts an array of shape (..., d) and returns shape (...).


def sphere(x):
    x = np.asarray(x, dtype=float)
    return np.sum(x**2, axis=-1)


def k_tablet(x):
    x = np.asarray(x, dtype=float)
    k = x.shape[-1] // 4
    return np.sum(x[..., :k] ** 2, axis=-1) + np.sum((100.0 * x[..., k:]) ** 2, axis=-1)


def rosenbrock_chain(x):
    x = np.asarray(x, dtype=float)
    head, tail = x[..., :-1], x[..., 1:]
    return np.sum(100.0 * (tail - head**2) ** 2 + (head - 1.0) ** 2, axis=-1)


def branin(x):
    x = np.asarray(x, dtype=float)
    x1, x2 = x[..., 0], x[..., 1]
    quad = x2 - BRANIN_B * x1**2 + BRANIN_C * x1 - BRANIN_R
    return BRANIN_A * quad**2 + BRANIN_S * (1.0 - BRANIN_T) * np.cos(x1) + BRANIN_S


def shekel5(x):
    x = np.asarray(x, dtype=float)
    sq = np.sum((x[..., None, :] - SHEKEL_C) ** 2, axis=-1)
    return -np.sum(1.0 / (sq + SHEKEL_BETA), axis=-1)


def hartmann6(x):
    x = np.asarray(x, dtype=float)
    inner = np.sum(HARTMANN6_A * (x[..., None, :] - HARTMANN6_P) ** 2, axis=-1)
    return -np.sum(HARTMANN6_ALPHA * np.exp(-inner), axis=-1)


@dataclass(frozen=True)
class Problem:
    name: str
    space: SearchSpace
    objective: Callable[[np.ndarray], float]
    known_best: float | None = None
    integer_axes: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return self.space.dim

    def __call__(self, x) -> float:
        p = np.asarray(x, dtype=float)
        if self.integer_axes:
            p = p.copy()
            idx = list(self.integer_axes)
            p[idx] = np.round(p[idx])
        return float(self.objective(p))


_TABLE = {
    "sphere": (sphere, SearchSpace.cube(-5.0, 10.0, 5), 0.0),
    "k-tablet": (k_tablet, SearchSpace.cube(-5.0, 10.0, 5), 0.0),
    "rosenbrock": (rosenbrock_chain, SearchSpace.cube(-5.0, 10.0, 5), 0.0),
    "branin": (branin, SearchSpace([-5.0, 0.0], [10.0, 15.0]), 0.397887357729739),
    "shekel5": (shekel5, SearchSpace.cube(0.0, 10.0, 4), -10.1531996790582),
    "hartmann6": (hartmann6, SearchSpace.cube(0.0, 1.0, 6), -3.32236801141551),
}

ALIASES = {
    "rosenbrock-chain": "rosenbrock",
    "shekel": "shekel5",
    "hartmann": "hartmann6",
}

PROBLEM_NAMES = tuple(_TABLE)


def canonical_name(name: str) -> str:
    key = name.strip().lower()
    key = ALIASES.get(key, key)
    if key not in _TABLE:
        raise UnknownProblem(f"unknown problem {name!r}; choose from {', '.join(PROBLEM_NAMES)}")
    return key


def get_problem(name: str) -> Problem:
    key = canonical_name(name)
    fn, space, best = _TABLE[key]
    return Problem(key, space, fn, best)


def benchmark_value(name: str, x) -> float:
    problem = get_problem(name)
    p = as_point(x)
    if p.size != problem.dim:
        raise ValueError(f"{problem.name} is {problem.dim}-dimensional, got a point of length {p.size}")
    return problem(p)


@dataclass(frozen=True)
class EvaluationRecord:
    index: int
    x: np.ndarray
    y: float
    best_so_far: float
    phase: str = ""


@dataclass
class BudgetedEvaluator:
    """Counts evaluations of ``problem`` and refuses to exceed ``budget``.

    ``phase`` is copied into each record so traces can be split into
    refinement, initial-design and model-driven parts afterwards.
    """

    problem: Problem
    budget: int
    log: list[EvaluationRecord] = field(default_factory=list)
    phase: str = ""

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError(f"budget must be positive, got {self.budget}")

    @property
    def count(self) -> int:
        return len(self.log)

    @property
    def remaining(self) -> int:
        return self.budget - len(self.log)

    def evaluate(self, x) -> float:
        if len(self.log) >= self.budget:
            raise BudgetExhausted(f"budget of {self.budget} evaluations spent")
        p = as_point(x)
        if not contains(self.problem.space, p):
            raise OutOfBounds(f"{p} lies outside {self.problem.space!r}")
        y = self.problem(p)
        if not math.isfinite(y):
            raise ValueError(f"objective returned non-finite value {y} at {p}")
        best = y if not self.log else min(self.log[-1].best_so_far, y)
        p = p.copy()
        p.flags.writeable = False
        self.log.append(EvaluationRecord(len(self.log) + 1, p, y, best, self.phase))
        return y

    def best(self) -> tuple[np.ndarray, float]:
        rec = best_record(self.log)
        return rec.x, rec.y


def best_record(records: list[EvaluationRecord]) -> EvaluationRecord:
    """Record with the smallest value; the earliest one wins ties."""
    if not records:
        raise ValueError("no evaluations recorded")
    best = records[0]
    for rec in records[1:]:
        if rec.y < best.y:
            best = rec
    return best


def best_so_far(ev: BudgetedEvaluator) -> tuple[np.ndarray, float]:
    return ev.best()


@dataclass
class TrialResult:
    method: str
    problem: str
    seed: int
    records: list[EvaluationRecord]
    info: dict = field(default_factory=dict)
    error: str | None = None
    trial: int = 0

    @property
    def best_value(self) -> float:
        return self.records[-1].best_so_far

    def best_sequence(self) -> np.ndarray:
        return np.array([r.best_so_far for r in self.records])
