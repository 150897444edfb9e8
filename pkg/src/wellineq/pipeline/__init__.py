"""Data ingestion, alignment, staged orchestration and output writers."""

from .align import CountryYearRecord, Exclusion, align_observations
from .config import ConfigError, RunConfig, load_config, parse_config
from .schemas import SchemaError, read_panel
from .stages import (ResultBundle, derive_seed, run_pipeline, stage_assemble, stage_fit,
                     stage_report, stage_sweep)

__all__ = [
    "ConfigError", "CountryYearRecord", "Exclusion", "ResultBundle", "RunConfig",
    "SchemaError", "align_observations", "derive_seed", "load_config", "parse_config",
    "read_panel", "run_pipeline", "stage_assemble", "stage_fit", "stage_report",
    "stage_sweep",
]
