"""CSV readers for the four input tables.

Every reader raises :class:`SchemaError` with the file, row and column of
the first violation it meets. Row numbers count the header as row 1.
"""

import csv
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

from ..gb2 import GroupedIncome

INCOME_FILE = "income.csv"
ATTAINMENT_FILE = "attainment.csv"
LIFETABLE_FILE = "lifetables.csv"
DEMOGRAPHY_FILE = "demography.csv"

ATTAINMENT_COLUMNS = ("country", "year", "level", "duration_years", "share")
LIFETABLE_COLUMNS = ("country", "period_start", "period_end", "age", "survivors")
DEMOGRAPHY_COLUMNS = ("country", "year", "share_0_4", "share_5_9", "share_10_14",
                      "share_15p", "primary_enroll", "secondary_enroll")


class SchemaError(ValueError):
    def __init__(self, path, row, column, message):
        self.path, self.row, self.column = str(path), row, column
        where = f"{Path(path).name}"
        if row is not None:
            where += f", row {row}"
        if column is not None:
            where += f", column {column!r}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class IncomeRow:
    country: str
    year: int
    u: tuple
    s: tuple
    mean_income: float
    population: float


@dataclass(frozen=True)
class AttainmentRow:
    country: str
    year: int
    labels: tuple
    durations: tuple
    shares: tuple


@dataclass(frozen=True)
class LifeTableRow:
    country: str
    period_start: int
    period_end: int
    ages: tuple
    survivors: tuple


@dataclass(frozen=True)
class DemographyRow:
    country: str
    year: int
    age_shares: tuple
    primary_enroll: float
    secondary_enroll: float


@dataclass(frozen=True)
class RawPanel:
    income: tuple
    attainment: tuple
    lifetables: tuple
    demography: tuple

    @property
    def countries(self):
        return sorted({r.country for r in self.income})


def _read(path, expected=None):
    path = Path(path)
    if not path.is_file():
        raise SchemaError(path, None, None, "file not found")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SchemaError(path, 1, None, "missing header row") from None
        if expected is not None and tuple(header) != tuple(expected):
            raise SchemaError(path, 1, None,
                              f"expected columns {', '.join(expected)}; got {', '.join(header)}")
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(not c.strip() for c in raw):
                continue
            if len(raw) != len(header):
                raise SchemaError(path, lineno, None,
                                  f"expected {len(header)} fields, found {len(raw)}")
            rows.append((lineno, dict(zip(header, (c.strip() for c in raw)))))
    return header, rows


def _num(path, lineno, row, col, kind=float):
    text = row[col]
    try:
        val = kind(text) if kind is float else int(text)
    except ValueError:
        raise SchemaError(path, lineno, col, f"not a number: {text!r}") from None
    if kind is float and not (val == val and abs(val) != float("inf")):
        raise SchemaError(path, lineno, col, f"not a finite number: {text!r}")
    return val


def _text(path, lineno, row, col):
    if not row[col]:
        raise SchemaError(path, lineno, col, "empty value")
    return row[col]


def read_income(path):
    """Income shares: country, year, u_1..u_J, s_1..s_J, mean_gni_ppp, population."""
    header, rows = _read(path)
    us = [h for h in header if re.fullmatch(r"u_\d+", h)]
    ss = [h for h in header if re.fullmatch(r"s_\d+", h)]
    j = len(us)
    expected = (["country", "year"] + [f"u_{k}" for k in range(1, j + 1)]
                + [f"s_{k}" for k in range(1, j + 1)] + ["mean_gni_ppp", "population"])
    if j < 3 or len(ss) != j or header != expected:
        raise SchemaError(path, 1, None,
                          "expected columns country, year, u_1..u_J, s_1..s_J, "
                          "mean_gni_ppp, population with J >= 3")
    out = []
    for lineno, row in rows:
        u = tuple(_num(path, lineno, row, c) for c in us)
        s = tuple(_num(path, lineno, row, c) for c in ss)
        for col, vals in (("u", u), ("s", s)):
            if any(not 0 < v < 1 for v in vals):
                raise SchemaError(path, lineno, f"{col}_*", "shares must lie strictly in (0, 1)")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise SchemaError(path, lineno, f"{col}_*", "cumulative shares must increase")
        if any(sv > uv + 1e-12 for uv, sv in zip(u, s)):
            raise SchemaError(path, lineno, "s_*", "income share above population share")
        mean = _num(path, lineno, row, "mean_gni_ppp")
        pop = _num(path, lineno, row, "population")
        if mean <= 0:
            raise SchemaError(path, lineno, "mean_gni_ppp", "must be positive")
        if pop <= 0:
            raise SchemaError(path, lineno, "population", "must be positive")
        try:
            GroupedIncome(u, s, mean, pop)
        except ValueError as exc:
            raise SchemaError(path, lineno, "s_*", str(exc)) from None
        out.append(IncomeRow(_text(path, lineno, row, "country"),
                             _num(path, lineno, row, "year", int), u, s, mean, pop))
    return tuple(out)


def read_attainment(path):
    """Per-level shares of the 15+ population, one row per level."""
    _, rows = _read(path, ATTAINMENT_COLUMNS)
    groups = defaultdict(list)
    for lineno, row in rows:
        key = (_text(path, lineno, row, "country"), _num(path, lineno, row, "year", int))
        share = _num(path, lineno, row, "share")
        dur = _num(path, lineno, row, "duration_years")
        if not 0 <= share <= 1:
            raise SchemaError(path, lineno, "share", "must lie in [0, 1]")
        if dur <= 0:
            raise SchemaError(path, lineno, "duration_years", "must be positive")
        groups[key].append((lineno, _text(path, lineno, row, "level"), dur, share))
    out = []
    for (country, year), items in sorted(groups.items()):
        items.sort(key=lambda t: t[2])
        labels = tuple(t[1] for t in items)
        if len(set(labels)) != len(labels):
            raise SchemaError(path, items[0][0], "level", f"duplicate level for {country} {year}")
        durs = tuple(t[2] for t in items)
        if any(b <= a for a, b in zip(durs, durs[1:])):
            raise SchemaError(path, items[0][0], "duration_years",
                              f"durations not strictly increasing for {country} {year}")
        shares = tuple(t[3] for t in items)
        if abs(sum(shares) - 1.0) > 1e-3:
            raise SchemaError(path, items[0][0], "share",
                              f"shares for {country} {year} sum to {sum(shares):.6f}, not 1")
        out.append(AttainmentRow(country, year, labels, durs, shares))
    return tuple(out)


def read_lifetables(path):
    _, rows = _read(path, LIFETABLE_COLUMNS)
    groups = defaultdict(list)
    for lineno, row in rows:
        key = (_text(path, lineno, row, "country"),
               _num(path, lineno, row, "period_start", int),
               _num(path, lineno, row, "period_end", int))
        if key[2] < key[1]:
            raise SchemaError(path, lineno, "period_end", "period ends before it starts")
        groups[key].append((lineno, _num(path, lineno, row, "age"),
                            _num(path, lineno, row, "survivors")))
    out = []
    for (country, start, end), items in sorted(groups.items()):
        items.sort(key=lambda t: t[1])
        ages = tuple(t[1] for t in items)
        lx = tuple(t[2] for t in items)
        first = items[0][0]
        if len(ages) < 2 or any(b <= a for a, b in zip(ages, ages[1:])):
            raise SchemaError(path, first, "age", f"ages for {country} {start}-{end} "
                                                  "must be distinct, at least two")
        if abs(lx[0] - 100000.0) > 1e-6:
            raise SchemaError(path, first, "survivors", "survivors must start at 100000")
        for (ln, _, a), (_, _, b) in zip(items, items[1:]):
            if b > a:
                raise SchemaError(path, ln, "survivors", "survivors increase with age")
        out.append(LifeTableRow(country, start, end, ages, lx))
    return tuple(out)


def read_demography(path):
    _, rows = _read(path, DEMOGRAPHY_COLUMNS)
    out = []
    for lineno, row in rows:
        shares = tuple(_num(path, lineno, row, c) for c in DEMOGRAPHY_COLUMNS[2:6])
        if any(s < 0 for s in shares) or abs(sum(shares) - 1.0) > 1e-6:
            raise SchemaError(path, lineno, "share_*", "age shares must be nonnegative and sum to 1")
        e1 = _num(path, lineno, row, "primary_enroll")
        e2 = _num(path, lineno, row, "secondary_enroll")
        for col, val in (("primary_enroll", e1), ("secondary_enroll", e2)):
            if not 0 <= val <= 1:
                raise SchemaError(path, lineno, col, "must lie in [0, 1]")
        out.append(DemographyRow(_text(path, lineno, row, "country"),
                                 _num(path, lineno, row, "year", int), shares, e1, e2))
    return tuple(out)


def read_panel(data_dir):
    data_dir = Path(data_dir)
    return RawPanel(
        income=read_income(data_dir / INCOME_FILE),
        attainment=read_attainment(data_dir / ATTAINMENT_FILE),
        lifetables=read_lifetables(data_dir / LIFETABLE_FILE),
        demography=read_demography(data_dir / DEMOGRAPHY_FILE),
    )
