"""Joint (income, lifespan, schooling) samples under the mixture copula
``(1 - omega) * independence + omega * comonotonic``.

Every uniform comes from a named stream seeded by ``(seed, stream, block)``
so that

* changing ``omega`` only changes which rows are comonotonic, never the
  uniforms themselves (common random numbers across an omega sweep), and
* any row range can be generated on its own and matches the same rows of
  a full-size draw.

Two pairings are available. ``"direct"`` maps the copula uniforms through
the marginal quantile functions row by row. ``"rank"`` first draws a fixed
pool of ``n`` values per dimension and then assigns them to rows by the
ranks of the copula uniforms, so every omega re-pairs the *same* marginal
values. Inequality bands and omega sweeps use ``"rank"``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

BLOCK = 8192
COLUMNS = ("income", "lifespan", "education")
PAIRINGS = ("direct", "rank")

_STREAMS = {"mix": 0, "shared": 1, "indep": 2, "pool": 3}


@dataclass(frozen=True)
class DependenceSpec:
    omega: float

    def __post_init__(self):
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")


@dataclass(frozen=True)
class JointSample:
    """``values[:, 0]`` income, ``values[:, 1]`` lifespan, ``values[:, 2]`` schooling."""

    values: np.ndarray
    omega: float
    seed: int
    pairing: str = "direct"
    comonotonic: np.ndarray = field(default=None, repr=False)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def income(self):
        return self.values[:, 0]

    @property
    def lifespan(self):
        return self.values[:, 1]

    @property
    def education(self):
        return self.values[:, 2]


def _open(u):
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    return u


def uniform_stream(seed, stream, n, index=0, start=0):
    """Uniforms for rows ``start .. start + n`` of one named stream.

    ``index`` distinguishes the per-dimension streams (``"indep"`` and
    ``"pool"``).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    code = _STREAMS[stream]
    stop = start + n
    out = np.empty(n)
    for block in range(start // BLOCK, (stop - 1) // BLOCK + 1):
        ss = np.random.SeedSequence(int(seed), spawn_key=(code, int(index), block))
        u = _open(np.random.default_rng(ss).random(BLOCK))
        lo, hi = max(start, block * BLOCK), min(stop, (block + 1) * BLOCK)
        out[lo - start:hi - start] = u[lo - block * BLOCK:hi - block * BLOCK]
    return out


class CommonRandomNumbers:
    """Cached uniforms and marginal quantiles for repeated sampling at many omegas.

    Parameters
    ----------
    quantiles : sequence of 3 callables
        Vectorized quantile functions for income, lifespan and schooling.
    n : int
    seed : int
    start : int
        First row index; lets callers generate disjoint row blocks.
    """

    def __init__(self, quantiles, n, seed, start=0):
        if len(quantiles) != 3:
            raise ValueError("need exactly three marginal quantile functions")
        if n < 1:
            raise ValueError("n must be at least 1")
        self.quantiles = tuple(quantiles)
        self.n, self.seed, self.start = int(n), int(seed), int(start)
        self.mix = uniform_stream(seed, "mix", n, start=start)
        self.shared = uniform_stream(seed, "shared", n, start=start)
        self.indep = np.column_stack(
            [uniform_stream(seed, "indep", n, index=j, start=start) for j in range(3)])
        self._direct = None
        self._pool = None

    def comonotonic_rows(self, omega):
        return self.mix < DependenceSpec(omega).omega

    def copula_uniforms(self, omega):
        como = self.comonotonic_rows(omega)
        return np.where(como[:, None], self.shared[:, None], self.indep), como

    def _direct_values(self):
        if self._direct is None:
            shared = np.column_stack([q(self.shared) for q in self.quantiles])
            indep = np.column_stack(
                [q(self.indep[:, j]) for j, q in enumerate(self.quantiles)])
            self._direct = (shared, indep)
        return self._direct

    def pool(self):
        """Sorted marginal values used by rank pairing."""
        if self._pool is None:
            self._pool = np.column_stack([
                np.sort(q(uniform_stream(self.seed, "pool", self.n, index=j, start=self.start)))
                for j, q in enumerate(self.quantiles)
            ])
        return self._pool

    def sample(self, omega, pairing="direct"):
        if pairing not in PAIRINGS:
            raise ValueError(f"pairing must be one of {PAIRINGS}")
        como = self.comonotonic_rows(omega)
        if pairing == "direct":
            shared, indep = self._direct_values()
            values = np.where(como[:, None], shared, indep)
        else:
            cu, _ = self.copula_uniforms(omega)
            ranks = np.argsort(np.argsort(cu, axis=0, kind="stable"), axis=0, kind="stable")
            pool = self.pool()
            values = np.take_along_axis(pool, ranks, axis=0)
        return JointSample(values, float(omega), self.seed, pairing, como)


def sample_joint(quantiles, spec, n, seed, pairing="direct"):
    """Draw ``n`` rows from the mixture copula with the given marginals.

    Each row is comonotonic with probability ``omega`` (one shared uniform
    for all three coordinates) and independent otherwise.
    """
    omega = spec.omega if isinstance(spec, DependenceSpec) else float(spec)
    return CommonRandomNumbers(quantiles, n, seed).sample(omega, pairing)


@dataclass(frozen=True)
class SpearmanResult:
    income_lifespan: float
    income_education: float
    lifespan_education: float

    @property
    def pairs(self):
        return (self.income_lifespan, self.income_education, self.lifespan_education)

    @property
    def average(self):
        return float(np.mean(self.pairs))


def _rank_corr(r1, r2):
    if np.ptp(r1) == 0 or np.ptp(r2) == 0:
        return float("nan")
    return float(np.corrcoef(r1, r2)[0, 1])


def empirical_spearman(sample):
    """Pairwise Spearman rank correlations (average ranks for ties).

    A constant coordinate gives ``nan`` for every pair that involves it.
    """
    values = sample.values if isinstance(sample, JointSample) else np.asarray(sample)
    if values.ndim != 2 or values.shape[1] != 3:
        raise ValueError("expected an (n, 3) sample")
    if values.shape[0] < 10:
        raise ValueError("need at least 10 rows for a rank correlation")
    ranks = [rankdata(values[:, j]) for j in range(3)]
    return SpearmanResult(_rank_corr(ranks[0], ranks[1]),
                          _rank_corr(ranks[0], ranks[2]),
                          _rank_corr(ranks[1], ranks[2]))
