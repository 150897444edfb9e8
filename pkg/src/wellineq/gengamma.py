"""Generalized gamma distribution for completed years of schooling.

Attainment rates are cumulative probabilities ``Pr[X <= d_j]`` for every
level except the last (completed tertiary), whose rate is the upper-tail
mass above its nominal duration. Fitting matches the cdf to the former
and the survival function to the latter.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special as sc
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from . import special
from ._optimize import FitConvergenceError, multistart_nelder_mead, start_grid

LEVELS = ("NS", "PI", "PC", "SI", "SC", "TI", "TC")
# Illiterate population is taken to have less than one year of schooling.
NS_DURATION = 1.0
TERTIARY_DURATION = 4.0

START_A = (0.7, 1.5, 3.0)
START_B = (4.0, 8.0, 12.0)
START_P = (0.5, 1.0, 2.0)
_LOG_BOUND = 25.0
_BOUNDARY_MARGIN = 3.0


class DegenerateDataError(ValueError):
    pass


@dataclass(frozen=True)
class GgParams:
    a: float
    b: float
    p: float

    def __post_init__(self):
        for name in ("a", "b", "p"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise ValueError(f"GG parameter {name} must be positive, got {val}")

    @property
    def zero_mode(self):
        """Density is unbounded or maximal at zero."""
        return self.a * self.p <= 1.0

    def pdf(self, x):
        return gg_pdf(x, self)

    def cdf(self, x):
        return gg_cdf(x, self)

    def quantile(self, u):
        return gg_quantile(u, self)

    def mean(self):
        return gg_mean(self)


@dataclass(frozen=True)
class AttainmentData:
    """Education levels with durations and rates; the last level is censored.

    ``rates[j]`` is cumulative for ``j < last`` and the tail mass for the
    last level.
    """

    labels: tuple
    durations: tuple
    rates: tuple

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        d = np.asarray(self.durations, dtype=float)
        r = np.asarray(self.rates, dtype=float)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "durations", tuple(d.tolist()))
        object.__setattr__(self, "rates", tuple(r.tolist()))
        if not (len(labels) == d.size == r.size) or d.ndim != 1:
            raise ValueError("labels, durations and rates must have equal length")
        if d.size < 2:
            raise ValueError("at least two education levels are required")
        if np.any(np.diff(d) <= 0) or np.any(d <= 0):
            raise ValueError("durations must be positive and strictly increasing")
        if np.any((r < 0) | (r > 1)):
            raise ValueError("rates must lie in [0, 1]")
        if np.any(np.diff(r[:-1]) < -1e-12):
            raise ValueError("cumulative rates must be nondecreasing")

    @classmethod
    def from_interval_shares(cls, labels, durations, shares):
        """Build from per-level population shares (prefix sums, tail kept)."""
        shares = np.asarray(shares, dtype=float)
        rates = np.cumsum(shares)
        rates[-1] = shares[-1]
        return cls(tuple(labels), tuple(durations), tuple(np.clip(rates, 0.0, 1.0)))

    def interval_shares(self):
        r = np.asarray(self.rates)
        return np.append(np.diff(r[:-1], prepend=0.0), r[-1])

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class GgFit:
    params: GgParams
    objective: float
    converged: bool
    at_boundary: bool
    n_starts: int
    n_converged: int
    start_objectives: tuple

    @property
    def zero_mode(self):
        return self.params.zero_mode


def _params(params):
    return params if isinstance(params, GgParams) else GgParams(*params)


def standard_durations(primary, secondary):
    """Level durations given the official primary and secondary cycle lengths.

    Incomplete levels sit halfway through their cycle.
    """
    pc = float(primary)
    sc_ = pc + float(secondary)
    tc = sc_ + TERTIARY_DURATION
    return (NS_DURATION, pc / 2.0, pc, pc + secondary / 2.0, sc_,
            sc_ + TERTIARY_DURATION / 2.0, tc)


def gg_pdf(x, params):
    # Normalized by Gamma(p), consistent with the cdf P(p, (x/b)^a).
    par = _params(params)
    a, b, p = par.a, par.b, par.p
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("years must be nonnegative")
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        logf = (np.log(a) + (a * p - 1.0) * np.log(x) - a * p * np.log(b)
                - (x / b) ** a - sc.gammaln(p))
        out = np.exp(logf)
    if np.any(x == 0):
        ap = a * p
        at_zero = 0.0 if ap > 1 else (np.inf if ap < 1 else a / (b * sc.gamma(p)))
        out = np.where(x == 0, at_zero, out)
    return float(out) if out.ndim == 0 else out


def gg_cdf(x, params):
    par = _params(params)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("years must be nonnegative")
    return special.reg_inc_gamma(par.p, (x / par.b) ** par.a)


def gg_quantile(u, params):
    par = _params(params)
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise ValueError("quantile level must lie strictly inside (0, 1)")
    z = np.where(u <= 0.5, sc.gammaincinv(par.p, u), sc.gammainccinv(par.p, 1.0 - u))
    out = par.b * z ** (1.0 / par.a)
    return float(out) if np.ndim(out) == 0 else out


def gg_mean(params):
    par = _params(params)
    return float(par.b * np.exp(sc.gammaln(par.p + 1.0 / par.a) - sc.gammaln(par.p)))


def gg_sample(n, params, seed):
    if n < 1:
        raise ValueError("n must be at least 1")
    from .gb2 import open_uniforms

    rng = np.random.default_rng(seed)
    return gg_quantile(open_uniforms(rng, n), params)


def censored_objective(params, data):
    """Squared cdf gaps below the last level plus the squared survival gap at it."""
    d = np.asarray(data.durations)
    r = np.asarray(data.rates)
    F = gg_cdf(d, params)
    return float(np.sum((F[:-1] - r[:-1]) ** 2) + ((1.0 - F[-1]) - r[-1]) ** 2)


def _make_objective(data):
    d = np.asarray(data.durations)
    r = np.asarray(data.rates)

    def fun(z):
        if np.any(np.abs(z) > _LOG_BOUND):
            return np.inf
        a, b, p = np.exp(z)
        F = sc.gammainc(p, (d / b) ** a)
        return float(np.sum((F[:-1] - r[:-1]) ** 2) + ((1.0 - F[-1]) - r[-1]) ** 2)

    return fun


def fit_gg(data, raise_on_failure=True):
    """Censored minimum-distance fit of a generalized gamma to attainment rates.

    Parameters
    ----------
    data : AttainmentData
        At least four levels.
    raise_on_failure : bool
        Raise :class:`FitConvergenceError` if no multi-start run converged.

    Returns
    -------
    GgFit
        ``at_boundary`` flags optima pushed toward the edge of the search
        box, which is what heavily zero-mode data produces.
    """
    if len(data) < 4:
        raise ValueError("GG fit needs at least 4 education levels")
    if np.any(data.interval_shares() >= 1.0 - 1e-12):
        raise DegenerateDataError("all attainment mass sits at a single level")
    fun = _make_objective(data)
    starts = [np.log(c) for c in start_grid(START_A, START_B, START_P)]
    res = multistart_nelder_mead(fun, starts)
    a, b, p = np.exp(res.x)
    fit = GgFit(
        params=GgParams(float(a), float(b), float(p)),
        objective=res.fun,
        converged=res.converged,
        at_boundary=bool(np.max(np.abs(res.x)) > _LOG_BOUND - _BOUNDARY_MARGIN),
        n_starts=len(res.starts),
        n_converged=res.n_converged,
        start_objectives=tuple(s.f0 for s in res.starts),
    )
    if raise_on_failure and not fit.converged and not fit.at_boundary:
        raise FitConvergenceError(
            f"GG fit did not converge from any of {fit.n_starts} starts "
            f"(best objective {fit.objective:.3e})",
            best=fit,
        )
    return fit


class GGAttainmentRegressor(RegressorMixin, BaseEstimator):
    """Estimator wrapper around :func:`fit_gg`.

    ``fit(durations, rates)`` treats the last entry of ``rates`` as the
    censored tail mass. ``predict(x)`` returns the fitted cdf.
    """

    def __init__(self, labels=None):
        self.labels = labels

    def fit(self, X, y):
        d = np.ravel(np.asarray(X, dtype=float))
        r = np.ravel(np.asarray(y, dtype=float))
        labels = self.labels if self.labels is not None else LEVELS[: d.size]
        fit = fit_gg(AttainmentData(tuple(labels), tuple(d), tuple(r)))
        self.params_ = fit.params
        self.objective_ = fit.objective
        self.fit_ = fit
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        return gg_cdf(np.ravel(np.asarray(X, dtype=float)), self.params_)
