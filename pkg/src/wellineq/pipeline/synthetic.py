"""A small synthetic four-country panel with known generating parameters.

The CSVs written by :func:`write_corpus` follow the input schemas exactly.
Shares are rounded to four decimals and survivors to whole persons, the
way published tables are, so fits are close to but not exactly at the
generating values. :func:`world` returns the generating global marginals
directly for tests that need a fixed world.
"""

from pathlib import Path

import numpy as np

from ..gb2 import Gb2Params, fit_gb2_scale, gb2_lorenz
from ..gengamma import LEVELS, GgParams, gg_cdf, standard_durations
from ..lifetable import LifeTable, mix_pdfs, table_to_pdf
from ..mixture import GlobalMarginal
from . import emit
from .schemas import ATTAINMENT_COLUMNS, DEMOGRAPHY_COLUMNS, LIFETABLE_COLUMNS

BENCHMARK_YEARS = (1990, 2000, 2010)
DECILES = tuple(round(k / 10, 1) for k in range(1, 10))
PERIODS = tuple((y, y + 5) for y in range(1980, 2015, 5))
AGES = tuple(float(a) for a in range(0, 101))

# country: (population in millions by benchmark year, income observation years,
#           primary years, secondary years). CSM has no income survey within four
# years of 1990, so that country-year is excluded.
COUNTRIES = {
    "ALD": ((5.0, 5.4, 5.8), (1990, 2001, 2010), 6, 6),
    "BRV": ((60.0, 72.0, 81.0), (1987, 2000, 2012), 6, 5),
    "CSM": ((250.0, 300.0, 330.0), (1984, 1998, 2009), 5, 6),
    "DNU": ((110.0, 140.0, 175.0), (1992, 2003, 2011), 6, 6),
}

# Generating parameters per country and benchmark year.
GB2 = {
    "ALD": [(3.2, 0.9, 1.1), (3.1, 1.0, 1.0), (3.0, 1.0, 1.0)],
    "BRV": [(2.2, 0.8, 1.3), (2.4, 0.9, 1.2), (2.5, 1.0, 1.2)],
    "CSM": [(1.6, 1.2, 1.6), (1.8, 1.1, 1.4), (2.1, 1.0, 1.3)],
    "DNU": [(1.9, 0.7, 1.5), (2.0, 0.8, 1.4), (2.2, 0.9, 1.3)],
}
MEAN_INCOME = {
    "ALD": (24000.0, 30000.0, 35000.0),
    "BRV": (7000.0, 8500.0, 11000.0),
    "CSM": (1200.0, 1900.0, 3200.0),
    "DNU": (2500.0, 3600.0, 5200.0),
}
GG = {
    "ALD": [(2.8, 12.5, 1.6), (3.0, 13.0, 1.7), (3.1, 13.5, 1.8)],
    "BRV": [(2.0, 9.0, 1.2), (2.2, 10.0, 1.3), (2.4, 11.0, 1.4)],
    "CSM": [(0.9, 3.5, 0.8), (1.1, 5.0, 0.9), (1.4, 6.5, 1.0)],
    "DNU": [(1.3, 5.5, 0.9), (1.6, 7.0, 1.0), (1.8, 8.5, 1.1)],
}
# Gompertz-Makeham hazard (makeham, gompertz level, slope) plus infant death probability.
MORTALITY = {
    "ALD": [(3e-4, 2.0e-5, 0.100, 0.009), (2.5e-4, 1.6e-5, 0.101, 0.006),
            (2e-4, 1.3e-5, 0.102, 0.004)],
    "BRV": [(1.2e-3, 4.0e-5, 0.092, 0.045), (1.0e-3, 3.2e-5, 0.094, 0.030),
            (8e-4, 2.6e-5, 0.096, 0.020)],
    "CSM": [(4e-3, 9.0e-5, 0.085, 0.110), (3e-3, 7.0e-5, 0.087, 0.085),
            (2.2e-3, 5.5e-5, 0.089, 0.060)],
    "DNU": [(2.5e-3, 6.0e-5, 0.088, 0.080), (2e-3, 4.8e-5, 0.090, 0.055),
            (1.5e-3, 3.8e-5, 0.092, 0.035)],
}
DEMOGRAPHY = {
    "ALD": [(0.06, 0.06, 0.06, 0.82, 0.99, 0.95), (0.055, 0.055, 0.06, 0.83, 0.99, 0.96),
            (0.05, 0.055, 0.055, 0.84, 0.99, 0.97)],
    "BRV": [(0.11, 0.11, 0.10, 0.68, 0.92, 0.60), (0.09, 0.10, 0.10, 0.71, 0.95, 0.72),
            (0.08, 0.08, 0.09, 0.75, 0.97, 0.80)],
    "CSM": [(0.17, 0.15, 0.13, 0.55, 0.60, 0.20), (0.16, 0.14, 0.13, 0.57, 0.72, 0.30),
            (0.15, 0.14, 0.12, 0.59, 0.85, 0.42)],
    "DNU": [(0.14, 0.13, 0.12, 0.61, 0.75, 0.35), (0.12, 0.12, 0.12, 0.64, 0.85, 0.48),
            (0.10, 0.11, 0.11, 0.68, 0.92, 0.60)],
}


def survivors(makeham, level, slope, infant):
    """Integer survivors at ages 0..100 from a synthetic hazard."""
    lx = [100000.0, 100000.0 * (1.0 - infant)]
    for age in AGES[2:]:
        mid = age - 0.5
        hazard = makeham + level * np.exp(slope * mid)
        lx.append(lx[-1] * np.exp(-hazard))
    return tuple(float(round(x)) for x in lx)


def _lorenz_row(shape, points):
    s = gb2_lorenz(np.asarray(points), shape)
    return tuple(round(float(x), 4) for x in s)


def _attainment_shares(params, primary, secondary):
    d = np.asarray(standard_durations(primary, secondary))
    F = gg_cdf(d, params)
    cum = np.append(F[:-1], 1.0)
    shares = np.diff(cum, prepend=0.0)
    shares[-1] = 1.0 - F[-1]
    # The tail share is the mass above the last duration; fold the gap into TI.
    shares[-2] = 1.0 - shares[:-2].sum() - shares[-1]
    shares = np.round(shares, 4)
    shares[-2] = round(1.0 - shares[:-2].sum() - shares[-1], 4)
    return d, shares


def _period_for(year):
    return max(p for p in PERIODS if p[0] <= year <= p[1])


def corpus_tables():
    """Rows of the income, attainment, life-table and demography files."""
    income_rows, att_rows, life_rows, demo_rows = [], [], [], []
    for code, (pops, obs_years, prim, sec) in COUNTRIES.items():
        periods = {}
        for k, bench in enumerate(BENCHMARK_YEARS):
            obs = obs_years[k]
            s = _lorenz_row(GB2[code][k], DECILES)
            income_rows.append((code, obs, DECILES, s, MEAN_INCOME[code][k], pops[k] * 1e6))
            d, shares = _attainment_shares(GG[code][k], prim, sec)
            for lab, dur, sh in zip(LEVELS, d, shares):
                att_rows.append((code, bench, lab, float(dur), float(sh)))
            demo_rows.append((code, bench) + DEMOGRAPHY[code][k])
            periods[_period_for(obs)] = MORTALITY[code][k]
        for period, mort in sorted(periods.items()):
            for age, lx in zip(AGES, survivors(*mort)):
                life_rows.append((code, period[0], period[1], age, lx))
    return income_rows, att_rows, life_rows, demo_rows


def write_corpus(data_dir):
    """Write income.csv, attainment.csv, lifetables.csv and demography.csv."""
    data_dir = Path(data_dir)
    income_rows, att_rows, life_rows, demo_rows = corpus_tables()
    j = len(DECILES)
    cols = (["country", "year"] + [f"u_{i}" for i in range(1, j + 1)]
            + [f"s_{i}" for i in range(1, j + 1)] + ["mean_gni_ppp", "population"])
    emit.write_text(data_dir / "income.csv", emit.format_csv(cols, [
        [c, y] + [f"{u:.1f}" for u in pts] + [f"{v:.4f}" for v in s]
        + [f"{m:.2f}", f"{p:.0f}"]
        for c, y, pts, s, m, p in income_rows
    ]))
    emit.write_text(data_dir / "attainment.csv", emit.format_csv(ATTAINMENT_COLUMNS, [
        [c, y, lab, f"{d:g}", f"{sh:.4f}"] for c, y, lab, d, sh in att_rows
    ]))
    emit.write_text(data_dir / "lifetables.csv", emit.format_csv(LIFETABLE_COLUMNS, [
        [c, p0, p1, f"{a:g}", f"{lx:.0f}"] for c, p0, p1, a, lx in life_rows
    ]))
    emit.write_text(data_dir / "demography.csv", emit.format_csv(DEMOGRAPHY_COLUMNS, [
        [c, y] + [f"{v:.4f}" for v in vals] for c, y, *vals in demo_rows
    ]))
    return data_dir


def world(year_index=2):
    """Generating global marginals for one benchmark year (0, 1 or 2).

    Returns ``(income, lifespan, education)`` where the first and last are
    :class:`GlobalMarginal` and lifespan is the mixed lifespan pdf.
    """
    codes = list(COUNTRIES)
    pops = np.array([COUNTRIES[c][0][year_index] for c in codes])
    w = pops / pops.sum()
    inc = []
    for c in codes:
        shape = GB2[c][year_index]
        b = fit_gb2_scale(MEAN_INCOME[c][year_index], shape)
        inc.append(Gb2Params(shape[0], b, shape[1], shape[2]))
    edu = [GgParams(*GG[c][year_index]) for c in codes]
    life = [table_to_pdf(LifeTable(AGES, survivors(*MORTALITY[c][year_index])))
            for c in codes]
    return (GlobalMarginal(tuple(inc), tuple(w), "income"),
            mix_pdfs(life, w),
            GlobalMarginal(tuple(edu), tuple(w), "education"))
