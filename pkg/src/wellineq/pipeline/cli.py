"""Command line entry point.

Exit codes: 0 success, 2 schema error, 3 fit non-convergence, 4 config error.
"""

import argparse
import logging
import sys
from importlib import resources
from pathlib import Path

from .config import ConfigError, RunConfig, load_config
from .schemas import SchemaError, read_panel
from . import stages

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_FIT = 3
EXIT_CONFIG = 4

log = logging.getLogger("wellineq")


def bundled_data_dir():
    """Directory of the synthetic demo corpus shipped with the package."""
    return Path(str(resources.files("wellineq") / "data" / "synthetic"))


def _u64(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML run configuration")
    common.add_argument("--data", type=Path, help="directory with the input CSV files")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--seed", type=_u64, help="master seed (overrides the config)")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="wellineq",
        description="Global multidimensional inequality bands from grouped data.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check input files against the schemas",
        "fit": "fit national income, education and lifespan distributions",
        "assemble": "build global marginals and the unidimensional table",
        "sweep": "evaluate bands and omega sweeps over the parameter grid",
        "report": "draw SVG charts from the sweep tables",
        "run": "run every stage",
        "demo": "run every stage on the bundled synthetic corpus",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def _config(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    return cfg.with_overrides(seed=args.seed)


def _out_dir(args, cfg):
    return Path(args.out) if args.out else Path(cfg.output_dir)


def _data_dir(args):
    if args.command == "demo":
        return args.data or bundled_data_dir()
    if args.data is None:
        raise ConfigError("--data is required")
    return args.data


def _report_fit(outcome):
    for e in outcome.failures:
        log.error("fit did not converge for %s %s: %s", e.country, e.year, e.detail)
    return EXIT_FIT if outcome.failures else EXIT_OK


def dispatch(args):
    cfg = _config(args)
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    out = _out_dir(args, cfg)
    cmd = args.command
    if cmd == "validate":
        panel = read_panel(_data_dir(args))
        print(f"ok: {len(panel.income)} income, {len(panel.attainment)} attainment, "
              f"{len(panel.lifetables)} life table, {len(panel.demography)} demography rows")
        return EXIT_OK
    if cmd == "fit":
        return _report_fit(stages.stage_fit(cfg, _data_dir(args), out, args.jobs))
    if cmd == "assemble":
        stages.stage_assemble(cfg, out)
        return EXIT_OK
    if cmd == "sweep":
        stages.stage_sweep(cfg, out, args.jobs)
        return EXIT_OK
    if cmd == "report":
        stages.stage_report(out)
        return EXIT_OK
    bundle = stages.run_pipeline(cfg, _data_dir(args), out, args.jobs)
    print(f"wrote results to {out}")
    return _report_fit(bundle.fit)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return dispatch(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
