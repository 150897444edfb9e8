"""Goalpost transforms, CES well-being and multidimensional Atkinson inequality."""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp
from sklearn.base import BaseEstimator, TransformerMixin

from .copula import COLUMNS, CommonRandomNumbers, JointSample

FLOOR = 1e-3
TRANSFORM_KINDS = ("log", "linear", "identity")


@dataclass(frozen=True)
class DimensionGoalpost:
    lower: float
    upper: float
    kind: str = "linear"

    def __post_init__(self):
        if self.kind not in TRANSFORM_KINDS:
            raise ValueError(f"transform kind must be one of {TRANSFORM_KINDS}")
        if not self.lower < self.upper:
            raise ValueError("goalpost lower bound must be below the upper bound")
        if self.kind == "log" and not self.lower > 0:
            raise ValueError("log goalposts need a positive lower bound")


@dataclass(frozen=True)
class Goalposts:
    """Per-dimension rescaling to a unit-free index clamped to ``[floor, 1]``.

    Defaults follow the HDI conventions: log income between 100 and 75,000
    PPP units, lifespan between 20 and 85 years, schooling between 0 and 15
    years.
    """

    income: DimensionGoalpost = DimensionGoalpost(100.0, 75000.0, "log")
    lifespan: DimensionGoalpost = DimensionGoalpost(20.0, 85.0, "linear")
    education: DimensionGoalpost = DimensionGoalpost(0.0, 15.0, "linear")
    floor: float = FLOOR

    def __post_init__(self):
        if not 0.0 < self.floor < 1.0:
            raise ValueError("floor must lie in (0, 1)")

    def __getitem__(self, dimension):
        if dimension not in COLUMNS:
            raise KeyError(dimension)
        return getattr(self, dimension)

    @classmethod
    def identity(cls):
        """No rescaling or clamping; useful for unit checks."""
        ident = DimensionGoalpost(0.0, 1.0, "identity")
        return cls(ident, ident, ident)


@dataclass(frozen=True)
class IndexParams:
    epsilon: float = 1.0
    beta: float = 1.0
    weights: tuple = field(default=(1 / 3, 1 / 3, 1 / 3))

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", tuple(w.tolist()))
        if self.epsilon < 0 or self.beta < 0:
            raise ValueError("epsilon and beta must be nonnegative")
        if w.shape != (3,) or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("weights must be three nonnegative numbers summing to 1")


def transform(value, dimension, g=None):
    g = Goalposts() if g is None else g
    post = g[dimension]
    v = np.asarray(value, dtype=float)
    if post.kind == "identity":
        out = v
    elif post.kind == "log":
        if np.any(v <= 0):
            raise ValueError("income must be positive before the log transform")
        out = (np.log(v) - np.log(post.lower)) / (np.log(post.upper) - np.log(post.lower))
    else:
        out = (v - post.lower) / (post.upper - post.lower)
    if post.kind != "identity":
        out = np.clip(out, g.floor, 1.0)
    return float(out) if np.ndim(out) == 0 else out


def transform_matrix(values, g=None):
    values = np.asarray(values, dtype=float)
    return np.column_stack([transform(values[:, j], dim, g) for j, dim in enumerate(COLUMNS)])


def log_ces(indices, beta, weights):
    """Log of the weighted generalized mean of each row of ``indices``.

    ``beta == 1`` is the geometric mean. Zero-weight dimensions are dropped
    so they cannot inject ``0 * inf``.
    """
    indices = np.atleast_2d(np.asarray(indices, dtype=float))
    w = np.asarray(weights, dtype=float)
    keep = w > 0
    logs = np.log(indices[:, keep])
    w = w[keep]
    if beta == 1.0:
        return logs @ w
    r = 1.0 - beta
    return logsumexp(r * logs, b=w, axis=1) / r


def ces_wellbeing(y, h, x, params=None, g=None):
    """CES well-being of (income, lifespan, schooling) after goalpost transforms."""
    params = IndexParams() if params is None else params
    idx = np.column_stack([np.atleast_1d(transform(v, dim, g))
                           for v, dim in zip((y, h, x), COLUMNS)])
    out = np.exp(log_ces(idx, params.beta, params.weights))
    return float(out[0]) if out.size == 1 and np.ndim(y) == 0 else out


def _atkinson_from_log_ratios(log_ratio, epsilon):
    if epsilon == 1.0:
        return 1.0 - float(np.exp(np.mean(log_ratio)))
    r = 1.0 - epsilon
    return 1.0 - float(np.mean(np.exp(r * log_ratio)) ** (1.0 / r))


def _column_means(values):
    mu = values.mean(axis=0)
    const = np.all(values == values[0], axis=0)
    return np.where(const, values[0], mu)


def atkinson_multi(sample, params=None, g=None):
    """Multidimensional Atkinson index of a joint sample.

    Each row's CES well-being is compared with the well-being of the mean
    outcome vector; the ratio is averaged with inequality aversion
    ``epsilon`` (log limit at ``epsilon == 1``).
    """
    params = IndexParams() if params is None else params
    values = sample.values if isinstance(sample, JointSample) else np.asarray(sample, float)
    if values.ndim != 2 or values.shape[1] != 3 or values.shape[0] < 2:
        raise ValueError("expected an (n, 3) sample with n >= 2")
    log_u = log_ces(transform_matrix(values, g), params.beta, params.weights)
    log_u_mu = log_ces(transform_matrix(_column_means(values)[None, :], g),
                       params.beta, params.weights)[0]
    return _atkinson_from_log_ratios(log_u - log_u_mu, params.epsilon)


def atkinson_uni(values, epsilon, transform_to=None):
    """One-dimensional Atkinson index.

    ``transform_to`` optionally names a goalpost (a :class:`DimensionGoalpost`)
    applied before measuring inequality.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 2:
        raise ValueError("need at least two values")
    if transform_to is not None:
        v = transform(v, "income", Goalposts(income=transform_to))
    if np.any(v < 0):
        raise ValueError("values must be nonnegative")
    if epsilon >= 1.0 and np.any(v <= 0):
        raise ValueError("values must be positive when epsilon >= 1")
    mu = v[0] if np.all(v == v[0]) else v.mean()
    with np.errstate(divide="ignore"):
        log_ratio = np.log(v) - np.log(mu)
    return _atkinson_from_log_ratios(log_ratio, epsilon)


@dataclass(frozen=True)
class Band:
    epsilon: float
    beta: float
    independent: float
    comonotonic: float

    @property
    def width(self):
        return abs(self.comonotonic - self.independent)

    @property
    def upper(self):
        """Which copula gives the larger index."""
        if self.comonotonic > self.independent:
            return "comonotonic"
        if self.comonotonic < self.independent:
            return "independent"
        return "equal"


def _crn(marginals, n, seed):
    if isinstance(marginals, CommonRandomNumbers):
        return marginals
    quantiles = [m.quantile if hasattr(m, "quantile") else m for m in marginals]
    return CommonRandomNumbers(quantiles, n, seed)


def inequality_band(marginals, params, g=None, n=10000, seed=0):
    """Atkinson index under the independence and comonotonic copulas.

    Both endpoints re-pair the same marginal draws, so the band collapses
    to a point when ``epsilon == beta``.
    """
    crn = _crn(marginals, n, seed)
    lo = atkinson_multi(crn.sample(0.0, "rank"), params, g)
    hi = atkinson_multi(crn.sample(1.0, "rank"), params, g)
    return Band(params.epsilon, params.beta, lo, hi)


def omega_sweep(marginals, params, g=None, omegas=None, n=10000, seed=0):
    """Atkinson index along a grid of comonotonic weights, with common random numbers."""
    omegas = np.linspace(0.0, 1.0, 11) if omegas is None else np.asarray(omegas, float)
    if np.any((omegas < 0) | (omegas > 1)):
        raise ValueError("omega grid must lie in [0, 1]")
    crn = _crn(marginals, n, seed)
    return [(float(w), atkinson_multi(crn.sample(w, "rank"), params, g)) for w in omegas]


class GoalpostTransformer(TransformerMixin, BaseEstimator):
    """Map raw (income, lifespan, schooling) rows to goalpost indices."""

    def __init__(self, goalposts=None):
        self.goalposts = goalposts

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 3:
            raise ValueError("expected an (n, 3) array")
        self.n_features_in_ = 3
        return self

    def transform(self, X):
        return transform_matrix(np.asarray(X, dtype=float), self.goalposts)
