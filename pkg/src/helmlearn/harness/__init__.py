"""Experiment harness: TOML configs, case/sweep runners, and the CLI."""

from .config import ExperimentConfig, load_config
from .runner import RunRecord, run_case, run_mfs_benchmark, run_sweep

__all__ = [
    "ExperimentConfig",
    "RunRecord",
    "load_config",
    "run_case",
    "run_mfs_benchmark",
    "run_sweep",
]
