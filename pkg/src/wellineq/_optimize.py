"""Multi-start Nelder-Mead used by the minimum-distance fitters."""

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

XATOL = 1e-10
# Only the simplex diameter decides convergence.
FATOL = np.inf
MAXITER = 5000
# Sum-of-squares objectives are nonnegative, so reaching this value is a
# global optimum for every tolerance used downstream; the search stops there.
OBJECTIVE_FLOOR = 1e-14


class FitConvergenceError(RuntimeError):
    """Raised when no start of a multi-start search converged.

    The best point found is still attached as ``best`` so callers can
    inspect or report it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


@dataclass
class StartResult:
    x0: np.ndarray
    f0: float
    x: np.ndarray
    fun: float
    nit: int
    converged: bool


@dataclass
class MultiStartResult:
    x: np.ndarray
    fun: float
    converged: bool
    starts: list = field(default_factory=list)

    @property
    def n_converged(self):
        return sum(s.converged for s in self.starts)


def start_grid(*axes):
    """Cartesian product of per-coordinate starting values."""
    return [np.array(c, dtype=float) for c in itertools.product(*axes)]


def _objective_safe(fun):
    def wrapped(z):
        with np.errstate(all="ignore"):
            val = fun(z)
        return val if np.isfinite(val) else np.inf

    return wrapped


def multistart_nelder_mead(fun, starts, xatol=XATOL, fatol=FATOL, maxiter=MAXITER,
                           floor=OBJECTIVE_FLOOR):
    """Minimize ``fun`` from every point in ``starts`` and keep the best.

    A start counts as converged when scipy reports success, i.e. the
    simplex shrank below ``xatol`` before ``maxiter`` iterations, or when
    its best value drops to ``floor``. In the latter case the remaining
    starts are skipped. The returned optimum is never worse than any
    starting point: if the simplex wandered uphill the start itself is kept.
    """
    obj = _objective_safe(fun)
    results = []

    def stop_at_floor(intermediate_result):
        if intermediate_result.fun <= floor:
            raise StopIteration

    for x0 in starts:
        x0 = np.asarray(x0, dtype=float)
        f0 = obj(x0)
        res = minimize(
            obj,
            x0,
            method="Nelder-Mead",
            callback=stop_at_floor if floor is not None else None,
            options={"xatol": xatol, "fatol": fatol, "maxiter": maxiter,
                     "maxfev": 4 * maxiter, "adaptive": False},
        )
        x, f = np.asarray(res.x, dtype=float), float(res.fun)
        if not f <= f0:
            x, f = x0, f0
        at_floor = floor is not None and f <= floor
        results.append(StartResult(x0, f0, x, f, int(res.nit), bool(res.success) or at_floor))
        if at_floor:
            break

    best = min(results, key=lambda r: (r.fun, not r.converged))
    return MultiStartResult(best.x, best.fun, any(r.converged for r in results), results)
