"""Match raw observations to benchmark years."""

from dataclasses import dataclass

from ..edu_prep import AgeAdjustInputs
from ..gb2 import GroupedIncome
from ..gengamma import AttainmentData
from ..lifetable import LifeTable

# Exclusion reason codes.
NO_INCOME = "no_income_in_window"
NO_LIFE_TABLE = "no_life_table"
NO_ATTAINMENT = "no_attainment_in_window"
NO_DEMOGRAPHY = "no_demography_in_window"
BAD_ATTAINMENT = "invalid_attainment"
FIT_FAILED = "fit_nonconvergence"


@dataclass(frozen=True)
class CountryYearRecord:
    country: str
    year: int
    income_year: int
    income: GroupedIncome
    attainment_year: int
    education: AgeAdjustInputs
    life_table: LifeTable

    @property
    def population(self):
        return self.income.population


@dataclass(frozen=True)
class Exclusion:
    year: int
    country: str
    reason: str
    detail: str = ""


def nearest_within(rows, target, window):
    """Row whose ``year`` is closest to ``target`` within ``window`` years.

    Ties go to the more recent observation.
    """
    cands = [r for r in rows if abs(r.year - target) <= window]
    if not cands:
        return None
    return min(cands, key=lambda r: (abs(r.year - target), -r.year))


def life_table_for(tables, year):
    """Period containing ``year``; on a shared boundary the later period wins."""
    cands = [t for t in tables if t.period_start <= year <= t.period_end]
    if not cands:
        return None
    return max(cands, key=lambda t: (t.period_start, t.period_end))


def _by_country(rows):
    out = {}
    for r in rows:
        out.setdefault(r.country, []).append(r)
    return out


def align_observations(panel, benchmark_years, window=4, school_entry_age=6.0):
    """Build one record per (country, benchmark year) or log why it is excluded.

    Returns
    -------
    records : list of CountryYearRecord
    exclusions : list of Exclusion
        Exactly one entry per excluded country-year.
    """
    income = _by_country(panel.income)
    attain = _by_country(panel.attainment)
    life = _by_country(panel.lifetables)
    demo = _by_country(panel.demography)
    countries = sorted(set(income) | set(attain) | set(life) | set(demo))

    records, exclusions = [], []
    for year in sorted(benchmark_years):
        for country in countries:
            inc = nearest_within(income.get(country, []), year, window)
            if inc is None:
                exclusions.append(Exclusion(year, country, NO_INCOME))
                continue
            lt = life_table_for(life.get(country, []), inc.year)
            if lt is None:
                exclusions.append(Exclusion(year, country, NO_LIFE_TABLE,
                                            f"income year {inc.year}"))
                continue
            att = nearest_within(attain.get(country, []), year, window)
            if att is None:
                exclusions.append(Exclusion(year, country, NO_ATTAINMENT))
                continue
            dem = nearest_within(demo.get(country, []), year, window)
            if dem is None:
                exclusions.append(Exclusion(year, country, NO_DEMOGRAPHY))
                continue
            try:
                cond = AttainmentData.from_interval_shares(att.labels, att.durations,
                                                           att.shares)
                if "PC" not in cond.labels:
                    raise ValueError("attainment levels lack PC (primary completed)")
                primary = cond.durations[cond.labels.index("PC")]
                # The schema allows a 1e-6 slack on the age shares; close it here.
                total = sum(dem.age_shares)
                shares = tuple(x / total for x in dem.age_shares)
                edu = AgeAdjustInputs(cond, shares, dem.primary_enroll,
                                      dem.secondary_enroll, school_entry_age, primary)
            except ValueError as exc:
                exclusions.append(Exclusion(year, country, BAD_ATTAINMENT, str(exc)))
                continue
            records.append(CountryYearRecord(
                country=country,
                year=year,
                income_year=inc.year,
                income=GroupedIncome(inc.u, inc.s, inc.mean_income, inc.population),
                attainment_year=att.year,
                education=edu,
                life_table=LifeTable(lt.ages, lt.survivors, country,
                                     (lt.period_start, lt.period_end)),
            ))
    return records, exclusions
