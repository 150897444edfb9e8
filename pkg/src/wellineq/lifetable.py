"""Length-of-life distributions from period life tables.

Deaths are spread uniformly within each age interval. The survivors at the
last tabulated age die in a closing interval as wide as the one before it.
"""

from dataclasses import dataclass, field

import numpy as np

RADIX = 100000.0


@dataclass(frozen=True)
class LifeTable:
    ages: tuple
    survivors: tuple
    country: str = ""
    period: tuple = ()

    def __post_init__(self):
        ages = np.asarray(self.ages, dtype=float)
        lx = np.asarray(self.survivors, dtype=float)
        object.__setattr__(self, "ages", tuple(ages.tolist()))
        object.__setattr__(self, "survivors", tuple(lx.tolist()))
        if ages.ndim != 1 or ages.shape != lx.shape:
            raise ValueError("ages and survivors must be 1-d and equally long")
        if ages.size < 2:
            raise ValueError("a life table needs at least two ages")
        if np.any(np.diff(ages) <= 0):
            raise ValueError("ages must be strictly increasing")
        if abs(lx[0] - RADIX) > 1e-6:
            raise ValueError(f"survivors must start at {RADIX:.0f}, got {lx[0]}")
        if np.any(np.diff(lx) > 0) or np.any(lx < 0):
            raise ValueError("survivors must be nonnegative and nonincreasing")


@dataclass(frozen=True)
class LifespanPdf:
    """Death probabilities ``mass[k]`` on intervals ``[bounds[k], bounds[k+1])``."""

    bounds: np.ndarray
    mass: np.ndarray
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bounds = np.asarray(self.bounds, dtype=float)
        mass = np.asarray(self.mass, dtype=float)
        if bounds.ndim != 1 or bounds.size != mass.size + 1:
            raise ValueError("need exactly one more bound than mass entries")
        if np.any(np.diff(bounds) <= 0):
            raise ValueError("bounds must be strictly increasing")
        if np.any(mass < 0) or abs(mass.sum() - 1.0) > 1e-9:
            raise ValueError("mass must be nonnegative and sum to 1")
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "mass", mass)
        cum = np.concatenate([[0.0], np.cumsum(mass)])
        cum[-1] = 1.0
        object.__setattr__(self, "_cum", cum)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.bounds, self._cum, left=0.0, right=1.0)
        return float(out) if out.ndim == 0 else out

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if np.any((u < 0) | (u > 1)):
            raise ValueError("quantile level must lie in [0, 1]")
        cum = self._cum
        # First interval whose upper cumulative exceeds u; empty intervals never match.
        k = np.clip(np.searchsorted(cum, u, side="right") - 1, 0, self.mass.size - 1)
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(self.mass[k] > 0, (u - cum[k]) / self.mass[k], 0.0)
        frac = np.clip(frac, 0.0, 1.0)
        out = self.bounds[k] + frac * (self.bounds[k + 1] - self.bounds[k])
        return float(out) if out.ndim == 0 else out

    def mean(self):
        mid = 0.5 * (self.bounds[:-1] + self.bounds[1:])
        return float(np.dot(self.mass, mid))


def table_to_pdf(table):
    lx = np.asarray(table.survivors, dtype=float)
    ages = np.asarray(table.ages, dtype=float)
    deaths = np.append(lx[:-1] - lx[1:], lx[-1])
    bounds = np.append(ages, ages[-1] + (ages[-1] - ages[-2]))
    return LifespanPdf(bounds, deaths / RADIX)


def mix_pdfs(pdfs, weights):
    """Population-weighted mixture of lifespan pdfs on a common grid."""
    pdfs = list(pdfs)
    w = np.asarray(weights, dtype=float)
    if not pdfs or w.shape != (len(pdfs),):
        raise ValueError("need one weight per pdf")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be nonnegative and sum to 1")
    bounds = pdfs[0].bounds
    for pdf in pdfs[1:]:
        if pdf.bounds.shape != bounds.shape or not np.array_equal(pdf.bounds, bounds):
            raise ValueError("lifespan pdfs are on different age grids")
    mass = np.zeros_like(pdfs[0].mass)
    for wc, pdf in zip(w, pdfs):
        mass = mass + wc * pdf.mass
    return LifespanPdf(bounds, mass)


def lifespan_sample(pdf, n, seed):
    """Draw an interval by its death probability, then an age uniformly inside it."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    k = rng.choice(pdf.mass.size, size=n, p=pdf.mass)
    lo, hi = pdf.bounds[k], pdf.bounds[k + 1]
    return lo + rng.random(n) * (hi - lo)
