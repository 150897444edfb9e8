"""Population-weighted mixtures of national distributions."""

from dataclasses import dataclass

import numpy as np

DIMENSIONS = ("income", "lifespan", "education")
QUANTILE_TOL = 1e-10
_MAX_ITER = 200


class BracketError(RuntimeError):
    pass


@dataclass(frozen=True)
class GlobalMarginal:
    """Mixture of national distributions.

    Each component must provide vectorized ``cdf(x)`` and ``quantile(u)``;
    :class:`~wellineq.gb2.Gb2Params`, :class:`~wellineq.gengamma.GgParams`
    and :class:`~wellineq.lifetable.LifespanPdf` all do.
    """

    components: tuple
    weights: tuple
    dimension: str = "income"

    def __post_init__(self):
        comps = tuple(self.components)
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", tuple(w.tolist()))
        if not comps:
            raise ValueError("a mixture needs at least one component")
        if w.shape != (len(comps),):
            raise ValueError("need one weight per component")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("weights must be nonnegative and sum to 1")
        if self.dimension not in DIMENSIONS:
            raise ValueError(f"unknown dimension {self.dimension!r}")

    @classmethod
    def from_populations(cls, components, populations, dimension="income"):
        pop = np.asarray(populations, dtype=float)
        return cls(tuple(components), tuple(pop / pop.sum()), dimension)

    def cdf(self, x):
        return global_cdf(x, self)

    def quantile(self, u):
        return global_quantile(u, self)


def global_cdf(x, m):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for w, comp in zip(m.weights, m.components):
        if w > 0:
            out = out + w * np.asarray(comp.cdf(x))
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def global_pdf(x, m):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for w, comp in zip(m.weights, m.components):
        if w > 0:
            out = out + w * np.asarray(comp.pdf(x))
    return float(out) if out.ndim == 0 else out


def global_quantile(u, m, tol=QUANTILE_TOL):
    """Invert :func:`global_cdf` by bracketed bisection.

    When every component has a ``pdf``, Newton steps that stay inside the
    bracket replace the midpoint.

    The bracket ``[min_c q_c(u), max_c q_c(u)]`` always contains the
    answer because the mixture cdf is a convex combination of the
    component cdfs.
    """
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise ValueError("quantile level must lie strictly inside (0, 1)")
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    active = [c for w, c in zip(m.weights, m.components) if w > 0]
    if len(active) == 1:
        out = np.asarray(active[0].quantile(u), dtype=float)
        return float(out[0]) if scalar else out

    qs = np.vstack([np.asarray(c.quantile(u), dtype=float) for c in active])
    lo, hi = qs.min(axis=0), qs.max(axis=0)
    f_lo, f_hi = global_cdf(lo, m) - u, global_cdf(hi, m) - u
    if np.any(f_lo > tol) or np.any(f_hi < -tol):
        raise BracketError("component quantiles do not bracket the mixture quantile")

    newton = all(hasattr(c, "pdf") for c in active)
    x = np.where(np.abs(f_lo) <= np.abs(f_hi), lo, hi)
    fx = np.where(np.abs(f_lo) <= np.abs(f_hi), f_lo, f_hi)
    todo = np.abs(fx) > tol
    for _ in range(_MAX_ITER):
        if not np.any(todo):
            break
        idx = np.flatnonzero(todo)
        lo_i, hi_i = lo[idx], hi[idx]
        mid = 0.5 * (lo_i + hi_i)
        if newton:
            # Newton step from the current iterate, kept only if it stays in the bracket.
            dens = global_pdf(x[idx], m)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = x[idx] - fx[idx] / dens
            ok = np.isfinite(step) & (step > lo_i) & (step < hi_i)
            mid = np.where(ok, step, mid)
        fm = global_cdf(mid, m) - u[idx]
        below = fm < 0
        lo[idx] = np.where(below, mid, lo_i)
        hi[idx] = np.where(below, hi_i, mid)
        x[idx], fx[idx] = mid, fm
        width = hi[idx] - lo[idx]
        # Converged in probability, or the bracket hit float resolution.
        todo[idx] = (np.abs(fm) > tol) & (width > 4 * np.finfo(float).eps * np.abs(mid))
    return float(x[0]) if scalar else x


def global_sample(n, m, seed, return_components=False):
    """Two-stage draw: a component by weight, then from that component."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    which = rng.choice(len(m.components), size=n, p=np.asarray(m.weights))
    u = rng.random(n)
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    out = np.empty(n)
    for c, comp in enumerate(m.components):
        sel = which == c
        if np.any(sel):
            out[sel] = comp.quantile(u[sel])
    return (out, which) if return_components else out
