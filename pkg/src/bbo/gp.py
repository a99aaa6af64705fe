"""Noise-free Gaussian-process regression with a single shared length-scale.

Kernels use the parameterization

    r2(x, x') = ||x - x'||^2 / length
    SE:        sigma_f * exp(-r2 / 2)
    Matern52:  sigma_f * (1 + sqrt(5 r2) + 5 r2 / 3) * exp(-sqrt(5 r2))

so ``length`` divides the *squared* distance and ``sigma_f`` is the prior
variance (a linear factor), not its square root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular
from scipy.spatial.distance import cdist

from .space import SearchSpace, to_unit

SE = "se"
MATERN52 = "matern52"
KERNELS = (SE, MATERN52)

BASE_JITTER = 1e-8
JITTER_CAP = 1e-2
LOG_2PI = math.log(2.0 * math.pi)

# log-space search box on unit-cube inputs
DEFAULT_BOUNDS = ((1e-3, 1e3), (1e-4, 1e2))


class NotPositiveDefinite(np.linalg.LinAlgError):
    """Kernel matrix stayed singular even at the jitter cap."""


@dataclass(frozen=True)
class KernelParams:
    kind: str = SE
    sigma_f: float = 1.0
    length: float = 1.0

    def __post_init__(self):
        if self.kind not in KERNELS:
            raise ValueError(f"unknown kernel {self.kind!r}")
        if not (self.sigma_f > 0 and self.length > 0):
            raise ValueError("sigma_f and length must be positive")


def _unit_kernel(kind: str, r2):
    if kind == SE:
        return np.exp(-0.5 * r2)
    s = np.sqrt(5.0 * r2)
    return (1.0 + s + 5.0 * r2 / 3.0) * np.exp(-s)


def sqdist(X, Y) -> np.ndarray:
    return cdist(np.atleast_2d(X), np.atleast_2d(Y), "sqeuclidean")


def kernel_value(params: KernelParams, x, x2) -> float:
    x = np.asarray(x, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x.shape != x2.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {x2.shape}")
    r2 = float(np.sum((x - x2) ** 2)) / params.length
    return params.sigma_f * float(_unit_kernel(params.kind, r2))


def kernel_matrix(params: KernelParams, X, Y=None) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = X if Y is None else np.atleast_2d(np.asarray(Y, dtype=float))
    return params.sigma_f * _unit_kernel(params.kind, sqdist(X, Y) / params.length)


@dataclass(frozen=True)
class Dataset:
    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.points, dtype=float))
        y = np.asarray(self.values, dtype=float).reshape(-1)
        if X.shape[0] != y.size:
            raise ValueError(f"{X.shape[0]} points but {y.size} values")
        object.__setattr__(self, "points", X)
        object.__setattr__(self, "values", y)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class GpModel:
    data: Dataset
    params: KernelParams
    factor: np.ndarray
    alpha: np.ndarray
    jitter: float

    def predict(self, x) -> tuple[float, float]:
        mu, var = self.predict_many(np.asarray(x, dtype=float)[None, :])
        return float(mu[0]), float(var[0])

    def predict_many(self, X) -> tuple[np.ndarray, np.ndarray]:
        k = kernel_matrix(self.params, X, self.data.points)
        mu = k @ self.alpha
        v = solve_triangular(self.factor, k.T, lower=True, check_finite=False)
        var = self.params.sigma_f - np.sum(v * v, axis=0)
        return mu, np.maximum(var, 0.0)


def _jitter_levels(base=BASE_JITTER, cap=JITTER_CAP):
    eps = base
    while eps <= cap * (1.0 + 1e-9):
        yield eps
        eps *= 10.0


def fit(data: Dataset, params: KernelParams, base_jitter=BASE_JITTER, jitter_cap=JITTER_CAP) -> GpModel:
    """Factorize ``K + jitter I``; jitter starts at ``base_jitter * sigma_f``
    and grows tenfold until the Cholesky succeeds or the cap is passed."""
    if len(data) < 1:
        raise ValueError("cannot fit a GP to an empty dataset")
    K = kernel_matrix(params, data.points)
    eye = np.eye(len(data))
    for eps in _jitter_levels(base_jitter, jitter_cap):
        jitter = eps * params.sigma_f
        try:
            L = np.linalg.cholesky(K + jitter * eye)
        except np.linalg.LinAlgError:
            continue
        alpha = cho_solve((L, True), data.values, check_finite=False)
        return GpModel(data, params, L, alpha, jitter)
    raise NotPositiveDefinite(
        f"kernel matrix of {len(data)} points not positive definite at jitter cap {jitter_cap}"
    )


def predict(model: GpModel, x) -> tuple[float, float]:
    return model.predict(x)


def log_marginal_likelihood(model: GpModel) -> float:
    y = model.data.values
    t = y.size
    return float(-0.5 * y @ model.alpha - np.sum(np.log(np.diag(model.factor))) - 0.5 * t * LOG_2PI)


def _profile_terms(kind, D, y, lengths):
    """For each length-scale, factor the unit-variance kernel matrix C + eps I
    (with the same jitter escalation as :func:`fit`) and return
    ``q = y^T (C + eps I)^-1 y`` and ``sum(log diag chol)``.

    Since ``K + eps sigma_f I = sigma_f (C + eps I)``, these two terms give the
    exact marginal likelihood for every sigma_f without refactorizing.
    Entries that fail at the cap come back as NaN.
    """
    m, t = lengths.size, y.size
    C = _unit_kernel(kind, D[None, :, :] / lengths[:, None, None])
    q = np.full(m, np.nan)
    half_logdet = np.full(m, np.nan)
    eye = np.eye(t)
    pending = np.arange(m)
    for eps in _jitter_levels():
        if pending.size == 0:
            break
        A = C[pending] + eps * eye
        try:
            Ls = np.linalg.cholesky(A)
            done = pending
        except np.linalg.LinAlgError:
            ok, Ls = [], []
            for j, idx in enumerate(pending):
                try:
                    Ls.append(np.linalg.cholesky(A[j]))
                    ok.append(idx)
                except np.linalg.LinAlgError:
                    pass
            done = np.array(ok, dtype=int)
            Ls = np.array(Ls).reshape(done.size, t, t)
        if done.size:
            z = np.linalg.solve(Ls, np.broadcast_to(y[:, None], (done.size, t, 1)))[..., 0]
            q[done] = np.sum(z * z, axis=1)
            half_logdet[done] = np.sum(np.log(np.diagonal(Ls, axis1=1, axis2=2)), axis=1)
        pending = np.setdiff1d(pending, done, assume_unique=True)
    return q, half_logdet


def _neg_lml(log_sf, q, half_logdet, t):
    val = 0.5 * q * np.exp(-log_sf) + 0.5 * t * log_sf + half_logdet + 0.5 * t * LOG_2PI
    return np.where(np.isfinite(val), val, np.inf)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_batch(fn, a, b, n_eval):
    """Vectorized golden-section minimization over independent brackets.

    Returns the best abscissa and value seen per bracket.
    """
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    best_x = np.where(fd < fc, d, c)
    best_f = np.minimum(fc, fd)
    for _ in range(max(n_eval - 2, 0)):
        left = fc <= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_x = np.where(left, b - _INVPHI * (b - a), a + _INVPHI * (b - a))
        new_f = fn(new_x)
        c, d = np.where(left, new_x, d), np.where(left, c, new_x)
        fc, fd = np.where(left, new_f, fd), np.where(left, fc, new_f)
        better = new_f < best_f
        best_x = np.where(better, new_x, best_x)
        best_f = np.where(better, new_f, best_f)
    return best_x, best_f


def optimize_hyperparameters(
    data: Dataset,
    kind: str = SE,
    bounds=DEFAULT_BOUNDS,
    rng=None,
    initial: KernelParams | None = None,
    n_starts: int = 32,
    n_sweeps: int = 5,
    n_golden: int = 5,
) -> KernelParams:
    """Maximize the log marginal likelihood over (sigma_f, length) in log space.

    ``n_starts`` log-uniform random starts (plus ``initial`` when given) are
    each improved by ``n_sweeps`` rounds of coordinate descent; every
    coordinate update is a golden-section search of ``n_golden`` evaluations
    on a bracket that halves each round.  Returns ``initial`` (or the box
    centre) if no candidate admits a factorization.
    """
    if len(data) < 2:
        raise ValueError("need at least two observations to fit hyperparameters")
    rng = np.random.default_rng(rng)
    lo = np.log([bounds[0][0], bounds[1][0]])
    hi = np.log([bounds[0][1], bounds[1][1]])
    fallback = initial or KernelParams(kind, float(np.exp((lo[0] + hi[0]) / 2)), float(np.exp((lo[1] + hi[1]) / 2)))

    theta = lo + (hi - lo) * rng.random((n_starts, 2))
    if initial is not None:
        first = np.clip(np.log([initial.sigma_f, initial.length]), lo, hi)
        theta = np.vstack([first, theta])

    D = sqdist(data.points, data.points)
    y = data.values
    t = y.size

    q, hld = _profile_terms(kind, D, y, np.exp(theta[:, 1]))
    f = _neg_lml(theta[:, 0], q, hld, t)

    width = 2.0
    for _ in range(n_sweeps):
        # output scale: the profile terms do not depend on it
        a = np.maximum(theta[:, 0] - width, lo[0])
        b = np.minimum(theta[:, 0] + width, hi[0])
        x_new, f_new = _golden_batch(lambda s: _neg_lml(s, q, hld, t), a, b, n_golden)
        better = f_new < f
        theta[better, 0] = x_new[better]
        f = np.where(better, f_new, f)

        # length-scale: every probe needs fresh factorizations
        def length_obj(log_l):
            qq, hh = _profile_terms(kind, D, y, np.exp(log_l))
            return _neg_lml(theta[:, 0], qq, hh, t)

        a = np.maximum(theta[:, 1] - width, lo[1])
        b = np.minimum(theta[:, 1] + width, hi[1])
        x_new, f_new = _golden_batch(length_obj, a, b, n_golden)
        better = f_new < f
        if np.any(better):
            theta[better, 1] = x_new[better]
            f = np.where(better, f_new, f)
            q, hld = _profile_terms(kind, D, y, np.exp(theta[:, 1]))
        width *= 0.5

    if not np.any(np.isfinite(f)):
        return fallback
    best = int(np.argmin(f))
    sf, length = np.exp(np.clip(theta[best], lo, hi))
    return KernelParams(kind, float(sf), float(length))


@dataclass(frozen=True, eq=False)
class Surrogate:
    """GP fitted in unit-cube coordinates of ``space``.

    With ``standardize`` the targets are shifted and scaled to zero mean and
    unit variance before fitting; :meth:`predict` undoes it.
    """

    space: SearchSpace
    model: GpModel
    y_shift: float = 0.0
    y_scale: float = 1.0

    def predict(self, X) -> tuple[np.ndarray, np.ndarray]:
        """Posterior mean and standard deviation at points ``X`` of shape (n, d)."""
        U = to_unit(self.space, np.atleast_2d(X))
        mu, var = self.model.predict_many(U)
        return self.y_shift + self.y_scale * mu, self.y_scale * np.sqrt(var)


def fit_surrogate(
    space: SearchSpace,
    X,
    y,
    kind: str = SE,
    rng=None,
    standardize: bool = True,
    initial: KernelParams | None = None,
    optimize: bool = True,
) -> Surrogate:
    y = np.asarray(y, dtype=float)
    shift, scale = 0.0, 1.0
    if standardize:
        shift = float(np.mean(y))
        sd = float(np.std(y))
        scale = sd if sd > 0 else 1.0
    data = Dataset(to_unit(space, np.atleast_2d(X)), (y - shift) / scale)
    params = initial or KernelParams(kind)
    if optimize and len(data) >= 2:
        params = optimize_hyperparameters(data, kind, rng=rng, initial=initial)
    return Surrogate(space, fit(data, params), shift, scale)
