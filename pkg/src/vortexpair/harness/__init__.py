"""Sweep configuration, execution, caching and serialisation."""

from .cache import ResultCache, default_cache_dir
from .config import RunConfig, load_config, parse_config
from .emit import emit, from_csv, from_json, to_csv, to_json
from .sweep import FIGURES, SweepResult, figure_config, run_figure, run_sweep

__all__ = [
    "FIGURES", "ResultCache", "RunConfig", "SweepResult", "default_cache_dir", "emit",
    "figure_config", "from_csv", "from_json", "load_config", "parse_config", "run_figure",
    "run_sweep", "to_csv", "to_json",
]
