"""Experiment orchestration: configuration, trial engine, sweeps and experiments."""

from .config import JSON_KEYS, WORKERS_ENV, SimConfig, load_config
from .engine import draw_trials, run_block, run_trial
from .experiments import (
    CsiAlignmentPoint,
    SpectrumResult,
    csi_alignment_csv,
    csi_alignment_experiment,
    spectrum_experiment,
)
from .rng import trial_generator
from .sweep import SWEEP_COLUMNS, PointCounts, SimResult, merge_results, run_point, run_sweep, wilson_interval

__all__ = [
    "JSON_KEYS",
    "WORKERS_ENV",
    "SimConfig",
    "load_config",
    "trial_generator",
    "draw_trials",
    "run_block",
    "run_trial",
    "run_point",
    "run_sweep",
    "PointCounts",
    "SimResult",
    "SWEEP_COLUMNS",
    "merge_results",
    "wilson_interval",
    "spectrum_experiment",
    "SpectrumResult",
    "csi_alignment_experiment",
    "csi_alignment_csv",
    "CsiAlignmentPoint",
]
