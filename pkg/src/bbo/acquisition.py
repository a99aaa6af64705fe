"""Expected improvement and its maximization over a box."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .gp import Surrogate
from .space import SearchSpace

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def expected_improvement(mu, sigma, f_min):
    """Closed-form EI for minimization; zero wherever ``sigma == 0``.

    Broadcasts over array arguments.
    """
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma < 0):
        raise ValueError("sigma must be non-negative")
    gain = f_min - mu
    pos = sigma > 0
    safe = np.where(pos, sigma, 1.0)
    z = gain / safe
    ei = safe * _INV_SQRT_2PI * np.exp(-0.5 * z * z) + gain * ndtr(z)
    ei = np.where(pos, np.maximum(ei, 0.0), 0.0)
    return float(ei) if ei.ndim == 0 else ei


@dataclass(frozen=True)
class AcquisitionQuery:
    f_min: float
    model: Surrogate
    space: SearchSpace

    def score(self, X) -> np.ndarray:
        mu, sigma = self.model.predict(X)
        return expected_improvement(mu, sigma, self.f_min)


def _first_argmax(values) -> int:
    # np.argmax already returns the first index among ties
    return int(np.argmax(values))


def maximize_acquisition(
    query: AcquisitionQuery,
    rng,
    n_candidates_per_dim: int = 1000,
    n_refine: int = 5,
    n_iter: int = 100,
    initial_step: float = 0.1,
) -> np.ndarray:
    """Random screening followed by compass search from the best candidates.

    ``n_candidates_per_dim * d`` uniform candidates are scored; the top
    ``n_refine`` each run ``n_iter`` polls of the 2d axis neighbours at
    per-axis step ``initial_step * width``, moving to the best strict
    improvement or halving the step.  The returned point has EI at least as
    large as every point examined.
    """
    space = query.space
    rng = np.random.default_rng(rng)
    d = space.dim
    lo, hi = space.lower, space.upper
    X = lo + (hi - lo) * rng.random((n_candidates_per_dim * d, d))
    ei = query.score(X)

    order = np.argsort(-ei, kind="stable")[:n_refine]
    pts = X[order].copy()
    vals = ei[order].copy()
    steps = np.tile(initial_step * (hi - lo), (pts.shape[0], 1))
    eye = np.eye(d)
    directions = np.vstack([eye, -eye])
    min_step = 1e-9 * (hi - lo)

    for _ in range(n_iter):
        active = np.any(steps > min_step, axis=1)
        if not np.any(active):
            break
        # (n_refine, 2d, d): +/- step along each axis
        moves = directions[None, :, :] * steps[:, None, :]
        trial = np.clip(pts[:, None, :] + moves, lo, hi)
        trial_ei = query.score(trial.reshape(-1, d)).reshape(pts.shape[0], 2 * d)
        j = np.argmax(trial_ei, axis=1)
        best = trial_ei[np.arange(pts.shape[0]), j]
        improved = (best > vals) & active
        pts[improved] = trial[improved, j[improved]]
        vals[improved] = best[improved]
        steps[~improved] *= 0.5

    if vals.size and vals.max() > ei.max():
        return pts[_first_argmax(vals)]
    return X[_first_argmax(ei)].copy()

