"""Generalized beta distribution of the second kind (GB2) for incomes.

The shape parameters are estimated from grouped Lorenz data by equally
weighted minimum distance; the scale is then pinned by matching the mean
to per-capita income.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special as sc
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from . import special
from ._optimize import FitConvergenceError, multistart_nelder_mead, start_grid

__all__ = [
    "Gb2Params",
    "GroupedIncome",
    "Gb2ShapeFit",
    "MomentError",
    "gb2_pdf",
    "gb2_cdf",
    "gb2_quantile",
    "gb2_mean",
    "gb2_lorenz",
    "fit_gb2_shape",
    "fit_gb2_scale",
    "gb2_sample",
    "GB2LorenzRegressor",
]

START_A = (0.5, 1.5, 3.0)
START_P = (0.3, 1.0, 3.0)
START_Q_OFFSET = (0.5, 2.0)  # q = 1/a + offset
# Search box in transformed coordinates; keeps the beta functions finite.
_LOG_BOUND = 25.0


class MomentError(ValueError):
    """The first moment of the GB2 does not exist (``q <= 1/a``)."""


@dataclass(frozen=True)
class Gb2Params:
    a: float
    b: float
    p: float
    q: float

    def __post_init__(self):
        for name in ("a", "b", "p", "q"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise ValueError(f"GB2 parameter {name} must be positive, got {val}")

    @property
    def shape(self):
        return (self.a, self.p, self.q)

    @property
    def has_mean(self):
        return self.q * self.a > 1.0

    def pdf(self, y):
        return gb2_pdf(y, self)

    def cdf(self, y):
        return gb2_cdf(y, self)

    def quantile(self, u):
        return gb2_quantile(u, self)

    def mean(self):
        return gb2_mean(self)


@dataclass(frozen=True)
class GroupedIncome:
    """Cumulative Lorenz ordinates for one country-year.

    ``u`` holds cumulative population shares and ``s`` the matching
    cumulative income shares, both strictly inside (0, 1).
    """

    u: tuple
    s: tuple
    mean_income: float
    population: float

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        s = np.asarray(self.s, dtype=float)
        object.__setattr__(self, "u", tuple(u.tolist()))
        object.__setattr__(self, "s", tuple(s.tolist()))
        if u.ndim != 1 or u.shape != s.shape:
            raise ValueError("u and s must be 1-d sequences of equal length")
        if u.size < 3:
            raise ValueError("at least 3 Lorenz points are required")
        if np.any((u <= 0) | (u >= 1)) or np.any((s <= 0) | (s >= 1)):
            raise ValueError("Lorenz coordinates must lie strictly inside (0, 1)")
        if np.any(np.diff(u) <= 0) or np.any(np.diff(s) <= 0):
            raise ValueError("u and s must be strictly increasing")
        if np.any(s > u + 1e-12):
            raise ValueError("income shares exceed population shares (s_j > u_j)")
        uu = np.concatenate([[0.0], u, [1.0]])
        ss = np.concatenate([[0.0], s, [1.0]])
        slopes = np.diff(ss) / np.diff(uu)
        if np.any(np.diff(slopes) < -1e-12):
            raise ValueError("Lorenz points are not convex")
        if not (self.mean_income > 0 and self.population > 0):
            raise ValueError("mean_income and population must be positive")

    @property
    def is_flat(self):
        """True when every point lies on the equality line."""
        return bool(np.max(np.subtract(self.u, self.s)) <= 1e-9)


@dataclass(frozen=True)
class Gb2ShapeFit:
    a: float
    p: float
    q: float
    objective: float
    converged: bool
    flat: bool
    n_starts: int
    n_converged: int
    start_objectives: tuple

    @property
    def shape(self):
        return (self.a, self.p, self.q)


def _params(params):
    if isinstance(params, Gb2Params):
        return params
    return Gb2Params(*params)


def gb2_pdf(y, params):
    par = _params(params)
    a, b, p, q = par.a, par.b, par.p, par.q
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("income must be nonnegative")
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        logt = a * (np.log(y) - np.log(b))
        logf = (np.log(a) + (a * p - 1.0) * np.log(y) - a * p * np.log(b)
                - sc.betaln(p, q) - (p + q) * np.logaddexp(0.0, logt))
        out = np.exp(logf)
    if np.any(y == 0):
        ap = a * p
        at_zero = 0.0 if ap > 1 else (np.inf if ap < 1 else a / (b ** ap * sc.beta(p, q)))
        out = np.where(y == 0, at_zero, out)
    return float(out) if out.ndim == 0 else out


def gb2_cdf(y, params):
    par = _params(params)
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("income must be nonnegative")
    with np.errstate(divide="ignore", over="ignore"):
        t = np.atleast_1d((y / par.b) ** par.a)
    out = np.empty_like(t)
    low = t <= 1.0
    out[low] = sc.betainc(par.p, par.q, t[low] / (1.0 + t[low]))
    # Upper tail from the complementary ratio to keep precision.
    with np.errstate(divide="ignore"):
        out[~low] = 1.0 - sc.betainc(par.q, par.p, 1.0 / (1.0 + t[~low]))
    out[np.isinf(t)] = 1.0
    return float(out[0]) if y.ndim == 0 else out


def gb2_quantile(u, params):
    par = _params(params)
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise ValueError("quantile level must lie strictly inside (0, 1)")
    uu = np.atleast_1d(u)
    low = uu <= 0.5
    ratio = np.empty_like(uu)
    v = np.atleast_1d(special.inv_reg_inc_beta(uu[low], par.p, par.q))
    w = np.atleast_1d(special.inv_reg_inc_beta(1.0 - uu[~low], par.q, par.p))
    with np.errstate(divide="ignore"):
        ratio[low] = v / (1.0 - v)
        ratio[~low] = (1.0 - w) / w
    out = par.b * ratio ** (1.0 / par.a)
    return float(out[0]) if u.ndim == 0 else out


def gb2_mean(params):
    par = _params(params)
    if not par.has_mean:
        raise MomentError(f"mean requires q > 1/a (q={par.q}, 1/a={1 / par.a})")
    ia = 1.0 / par.a
    return float(par.b * np.exp(sc.betaln(par.p + ia, par.q - ia) - sc.betaln(par.p, par.q)))


def gb2_lorenz(u, shape):
    """Lorenz ordinate of a GB2 with shape ``(a, p, q)``.

    The curve is scale free, so ``b`` is not needed.
    """
    a, p, q = (float(x) for x in shape)
    if not q * a > 1.0:
        raise MomentError(f"Lorenz curve requires q > 1/a (q={q}, 1/a={1 / a})")
    u = np.asarray(u, dtype=float)
    if np.any((u < 0) | (u > 1)):
        raise ValueError("u must lie in [0, 1]")
    v = special.inv_reg_inc_beta(u, p, q)
    out = special.reg_inc_beta(v, p + 1.0 / a, q - 1.0 / a)
    return out


def _to_shape(z):
    a = np.exp(z[0])
    return a, np.exp(z[1]), 1.0 / a + np.exp(z[2])


def _from_shape(a, p, q):
    return np.array([np.log(a), np.log(p), np.log(q - 1.0 / a)])


def _lorenz_objective(u, s):
    def fun(z):
        if np.any(np.abs(z) > _LOG_BOUND):
            return np.inf
        a, p, q = _to_shape(z)
        v = special.inv_reg_inc_beta(u, p, q)
        lor = sc.betainc(p + 1.0 / a, q - 1.0 / a, v)
        return float(np.sum((lor - s) ** 2))

    return fun


def fit_gb2_shape(data, raise_on_failure=True):
    """Fit ``(a, p, q)`` to grouped Lorenz ordinates.

    Minimizes the unweighted sum of squared gaps between fitted and observed
    Lorenz ordinates with a multi-start Nelder-Mead simplex over
    ``(log a, log p, log(q - 1/a))``, which keeps ``q > 1/a`` for free.

    Parameters
    ----------
    data : GroupedIncome
    raise_on_failure : bool
        If True, raise :class:`FitConvergenceError` when no start converged
        (perfect-equality data is exempt and is flagged ``flat`` instead).

    Returns
    -------
    Gb2ShapeFit
    """
    u = np.asarray(data.u, dtype=float)
    s = np.asarray(data.s, dtype=float)
    fun = _lorenz_objective(u, s)
    starts = [
        _from_shape(a, p, 1.0 / a + dq)
        for a, p, dq in start_grid(START_A, START_P, START_Q_OFFSET)
    ]
    res = multistart_nelder_mead(fun, starts)
    a, p, q = _to_shape(res.x)
    fit = Gb2ShapeFit(
        a=float(a), p=float(p), q=float(q),
        objective=res.fun,
        converged=res.converged,
        flat=data.is_flat,
        n_starts=len(res.starts),
        n_converged=res.n_converged,
        start_objectives=tuple(r.f0 for r in res.starts),
    )
    if raise_on_failure and not fit.converged and not fit.flat:
        raise FitConvergenceError(
            f"GB2 Lorenz fit did not converge from any of {fit.n_starts} starts "
            f"(best objective {fit.objective:.3e})",
            best=fit,
        )
    return fit


def fit_gb2_scale(mean_income, shape):
    """Scale ``b`` that makes the GB2 mean equal ``mean_income``."""
    a, p, q = (float(x) for x in shape)
    if not mean_income > 0:
        raise ValueError("mean_income must be positive")
    if not q * a > 1.0:
        raise MomentError(f"mean requires q > 1/a (q={q}, 1/a={1 / a})")
    ia = 1.0 / a
    return float(mean_income * np.exp(sc.betaln(p, q) - sc.betaln(p + ia, q - ia)))


def open_uniforms(rng, n):
    """``n`` uniforms on the open interval (0, 1)."""
    u = rng.random(n)
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    return u


def gb2_sample(n, params, seed):
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    return gb2_quantile(open_uniforms(rng, n), params)


class GB2LorenzRegressor(RegressorMixin, BaseEstimator):
    """Estimator wrapper around :func:`fit_gb2_shape`.

    ``fit(u, s)`` takes cumulative population shares and income shares;
    ``predict(u)`` returns fitted Lorenz ordinates. Passing ``mean_income``
    also calibrates ``b_`` so the full distribution is available as
    ``params_``.
    """

    def __init__(self, mean_income=None):
        self.mean_income = mean_income

    def fit(self, X, y):
        u = np.ravel(np.asarray(X, dtype=float))
        s = np.ravel(np.asarray(y, dtype=float))
        data = GroupedIncome(u, s, self.mean_income or 1.0, 1.0)
        fit = fit_gb2_shape(data)
        self.a_, self.p_, self.q_ = fit.shape
        self.objective_ = fit.objective
        self.fit_ = fit
        if self.mean_income is not None:
            self.b_ = fit_gb2_scale(self.mean_income, fit.shape)
            self.params_ = Gb2Params(self.a_, self.b_, self.p_, self.q_)
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        u = np.ravel(np.asarray(X, dtype=float))
        return gb2_lorenz(u, (self.a_, self.p_, self.q_))
