"""Pipeline stages.

``fit`` -> ``assemble`` -> ``sweep`` -> ``report``. Each stage reads the
previous stage's files from the output directory, so any stage can be
rerun on its own.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from .. import edu_prep
from .._optimize import FitConvergenceError
from ..copula import CommonRandomNumbers
from ..gb2 import Gb2Params, fit_gb2_scale, fit_gb2_shape
from ..gengamma import DegenerateDataError, GgParams, fit_gg
from ..lifetable import LifespanPdf, mix_pdfs, table_to_pdf
from ..mixture import GlobalMarginal
from ..wellbeing import atkinson_multi, atkinson_uni
from . import emit
from .align import FIT_FAILED, Exclusion, align_observations
from .schemas import read_panel

log = logging.getLogger(__name__)

FITS_JSON = "fits.json"
GLOBAL_JSON = "global.json"
PARAMS_CSV = "national_params.csv"
EXCLUSIONS_CSV = "exclusions.csv"
TABLE1_CSV = "table1.csv"
BANDS_CSV = "bands.csv"
SWEEP_CSV = "omega_sweep.csv"
CHART_DIR = "charts"
# Band endpoints closer than this are reported as equal.
EQUAL_TOL = 1e-12


def derive_seed(master, *labels):
    """Stable 64-bit sub-seed from the master seed and string labels."""
    text = "|".join([str(int(master))] + [str(x) for x in labels])
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "little")


def _dump_json(path, obj):
    return emit.write_text(path, json.dumps(obj, indent=1, sort_keys=True) + "\n")


def _load_json(path):
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"missing stage artifact {path}; run the previous stage first")
    return json.loads(path.read_text(encoding="utf-8"))


@dataclass
class FitOutcome:
    records: list
    exclusions: list
    failures: list = field(default_factory=list)


def fit_record(record):
    """Fit the three national marginals of one country-year.

    Returns a JSON-ready dict, or raises :class:`FitConvergenceError`.
    """
    shape = fit_gb2_shape(record.income)
    b = fit_gb2_scale(record.income.mean_income, shape.shape)
    rates = edu_prep.unconditional_rates(record.education)
    gg = fit_gg(rates)
    pdf = table_to_pdf(record.life_table)
    return {
        "country": record.country,
        "year": record.year,
        "income_year": record.income_year,
        "attainment_year": record.attainment_year,
        "population": record.population,
        "gb2": {"a": shape.a, "b": b, "p": shape.p, "q": shape.q,
                "objective": shape.objective, "converged": shape.converged,
                "flat": shape.flat},
        "gg": {"a": gg.params.a, "b": gg.params.b, "p": gg.params.p,
               "objective": gg.objective, "converged": gg.converged,
               "zero_mode": gg.zero_mode, "at_boundary": gg.at_boundary},
        "life": {"period": list(record.life_table.period),
                 "bounds": pdf.bounds.tolist(), "mass": pdf.mass.tolist()},
    }


def _safe_fit(record):
    try:
        return fit_record(record), None
    except (FitConvergenceError, DegenerateDataError) as exc:
        return None, str(exc)


def _with_weights(fits):
    by_year = {}
    for f in fits:
        by_year.setdefault(f["year"], []).append(f)
    for items in by_year.values():
        total = sum(f["population"] for f in items)
        for f in items:
            f["weight"] = f["population"] / total
    return fits


def stage_fit(config, data_dir, out_dir, jobs=1):
    """Ingest, align, and fit every country-year. Fitting uses no random numbers."""
    panel = read_panel(data_dir)
    records, exclusions = align_observations(panel, config.benchmark_years, config.window,
                                             config.school_entry_age)
    results = Parallel(n_jobs=jobs)(delayed(_safe_fit)(r) for r in records)
    fits, failures = [], []
    for rec, (fit, err) in zip(records, results):
        if fit is None:
            failures.append(Exclusion(rec.year, rec.country, FIT_FAILED, err))
        else:
            fits.append(fit)
    exclusions = sorted(exclusions + failures, key=lambda e: (e.year, e.country))
    fits = _with_weights(sorted(fits, key=lambda f: (f["year"], f["country"])))

    out = Path(out_dir)
    _dump_json(out / FITS_JSON, {
        "fits": fits,
        "exclusions": [e.__dict__ for e in exclusions],
    })
    emit.write_csv(out / PARAMS_CSV, emit.PARAM_COLUMNS, [
        (f["year"], f["country"], f["income_year"], f["attainment_year"],
         f["life"]["period"][0], f["life"]["period"][1], float(f["population"]),
         float(f["weight"]), f["gb2"]["a"], f["gb2"]["b"], f["gb2"]["p"], f["gb2"]["q"],
         f["gb2"]["objective"], f["gg"]["a"], f["gg"]["b"], f["gg"]["p"],
         f["gg"]["objective"])
        for f in fits
    ])
    emit.write_csv(out / EXCLUSIONS_CSV, emit.EXCLUSION_COLUMNS,
                   [(e.year, e.country, e.reason, e.detail) for e in exclusions])
    for e in exclusions:
        log.info("excluded %s %s: %s %s", e.country, e.year, e.reason, e.detail)
    return FitOutcome(fits, exclusions, failures)


@dataclass(frozen=True)
class WorldYear:
    """Global marginals of one benchmark year."""

    year: int
    countries: tuple
    income: GlobalMarginal
    education: GlobalMarginal
    lifespan: LifespanPdf

    @property
    def quantiles(self):
        return (self.income.quantile, self.lifespan.quantile, self.education.quantile)


def build_world(year, fits):
    fits = [f for f in fits if f["year"] == year]
    if not fits:
        raise ValueError(f"no fitted countries for {year}")
    w = np.array([f["population"] for f in fits], dtype=float)
    w = w / w.sum()
    inc = GlobalMarginal(
        tuple(Gb2Params(f["gb2"]["a"], f["gb2"]["b"], f["gb2"]["p"], f["gb2"]["q"])
              for f in fits), tuple(w), "income")
    edu = GlobalMarginal(
        tuple(GgParams(f["gg"]["a"], f["gg"]["b"], f["gg"]["p"]) for f in fits),
        tuple(w), "education")
    life = mix_pdfs([LifespanPdf(f["life"]["bounds"], f["life"]["mass"]) for f in fits], w)
    return WorldYear(year, tuple(f["country"] for f in fits), inc, edu, life)


def _table1_row(world, config):
    from ..copula import uniform_stream

    eps = config.table_epsilon
    cols = {}
    for name, dist in (("income", world.income), ("health", world.lifespan),
                       ("education", world.education)):
        u = uniform_stream(derive_seed(config.seed, world.year, name, "table1"), "pool",
                           config.n)
        cols[name] = dist.quantile(u)
    return (world.year,
            atkinson_uni(cols["income"], eps, transform_to=config.goalposts.income),
            atkinson_uni(cols["income"], eps),
            atkinson_uni(cols["education"], eps),
            atkinson_uni(cols["health"], eps))


def stage_assemble(config, out_dir):
    out = Path(out_dir)
    fits = _load_json(out / FITS_JSON)["fits"]
    years = sorted({f["year"] for f in fits})
    worlds = [build_world(y, fits) for y in years]
    rows = [_table1_row(w, config) for w in worlds]
    emit.write_csv(out / TABLE1_CSV, emit.TABLE1_COLUMNS, rows)
    _dump_json(out / GLOBAL_JSON, {
        "years": [
            {"year": w.year, "countries": list(w.countries),
             "weights": list(w.income.weights),
             "lifespan": {"bounds": w.lifespan.bounds.tolist(),
                          "mass": w.lifespan.mass.tolist()}}
            for w in worlds
        ],
    })
    return worlds, rows


def _worlds_from_artifacts(out):
    fits = _load_json(out / FITS_JSON)["fits"]
    glob = _load_json(out / GLOBAL_JSON)
    return [build_world(entry["year"], fits) for entry in glob["years"]]


def _sweep_year(world, config):
    crn = CommonRandomNumbers(world.quantiles, config.n,
                              derive_seed(config.seed, world.year, "joint"))
    grid = [(e, b) for e in config.epsilons for b in config.betas]
    omegas = sorted(set(config.omegas) | {0.0, 1.0})
    index = {}
    for w in omegas:
        sample = crn.sample(w, "rank")
        for e, b in grid:
            index[(e, b, w)] = atkinson_multi(sample, config.index_params(e, b),
                                              config.goalposts)
    bands = []
    for e, b in grid:
        lo, hi = index[(e, b, 0.0)], index[(e, b, 1.0)]
        if abs(hi - lo) <= EQUAL_TOL:
            upper = "equal"
        else:
            upper = "comonotonic" if hi > lo else "independent"
        bands.append((world.year, float(e), float(b), lo, hi, abs(hi - lo), upper))
    sweeps = [(world.year, float(e), float(b), float(w), index[(e, b, w)])
              for e, b in grid for w in config.omegas]
    return bands, sweeps


def stage_sweep(config, out_dir, jobs=1):
    out = Path(out_dir)
    worlds = _worlds_from_artifacts(out)
    results = Parallel(n_jobs=jobs)(delayed(_sweep_year)(w, config) for w in worlds)
    bands = [row for b, _ in results for row in b]
    sweeps = [row for _, s in results for row in s]
    emit.write_csv(out / BANDS_CSV, emit.BAND_COLUMNS, bands)
    emit.write_csv(out / SWEEP_CSV, emit.SWEEP_COLUMNS, sweeps)
    return bands, sweeps


def stage_report(out_dir):
    out = Path(out_dir)
    bands = emit.read_csv(out / BANDS_CSV)
    sweeps = emit.read_csv(out / SWEEP_CSV)
    written = []
    pairs = sorted({(r["epsilon"], r["beta"]) for r in bands},
                   key=lambda t: (float(t[0]), float(t[1])))
    for e, b in pairs:
        tag = f"e{float(e):g}_b{float(b):g}"
        rows = sorted((r for r in bands if (r["epsilon"], r["beta"]) == (e, b)),
                      key=lambda r: int(r["year"]))
        years = [int(r["year"]) for r in rows]
        svg = emit.line_chart_svg(
            [("independent", years, [float(r["independent"]) for r in rows]),
             ("comonotonic", years, [float(r["comonotonic"]) for r in rows])],
            title=f"Inequality band, epsilon={float(e):g}, beta={float(b):g}",
            xlabel="year", ylabel="Atkinson index")
        written.append(emit.write_text(out / CHART_DIR / f"band_{tag}.svg", svg))

        srows = [r for r in sweeps if (r["epsilon"], r["beta"]) == (e, b)]
        series = []
        for y in sorted({int(r["year"]) for r in srows}):
            pts = sorted((float(r["omega"]), float(r["index"]))
                         for r in srows if int(r["year"]) == y)
            series.append((str(y), [p[0] for p in pts], [p[1] for p in pts]))
        if series:
            svg = emit.line_chart_svg(series, title=f"Omega sweep, epsilon={float(e):g}, beta={float(b):g}",
                                      xlabel="omega (Spearman)", ylabel="Atkinson index")
            written.append(emit.write_text(out / CHART_DIR / f"omega_{tag}.svg", svg))
    return written


@dataclass
class ResultBundle:
    fit: FitOutcome
    table1: list
    bands: list
    sweeps: list
    charts: list


def run_pipeline(config, data_dir, out_dir=None, jobs=1):
    """Run every stage end to end and return the in-memory results."""
    out = Path(out_dir if out_dir is not None else config.output_dir)
    fit = stage_fit(config, data_dir, out, jobs)
    _, table1 = stage_assemble(config, out)
    bands, sweeps = stage_sweep(config, out, jobs)
    charts = stage_report(out)
    return ResultBundle(fit, table1, bands, sweeps, charts)
