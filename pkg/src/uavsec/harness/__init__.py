"""Monte-Carlo sweep harness: config loading, seeded trial execution, CSV output."""

from .config import SweepSpec, load_config, parse_config, preset_configs, scenario_for
from .runner import (
    RESULTS_HEADER,
    SUMMARY_HEADER,
    ResultRow,
    SummaryRow,
    mix_seed,
    read_results,
    read_summary,
    run_sweep,
    summarize,
)

__all__ = [
    "SweepSpec",
    "load_config",
    "parse_config",
    "preset_configs",
    "scenario_for",
    "RESULTS_HEADER",
    "SUMMARY_HEADER",
    "ResultRow",
    "SummaryRow",
    "mix_seed",
    "read_results",
    "read_summary",
    "run_sweep",
    "summarize",
]
