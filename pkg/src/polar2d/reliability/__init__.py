"""Capacity oracle, RCA/GA reliability evolution and frozen-set construction."""

from .capacity import (
    GAMMA_FIXED_POINT,
    biawgn_capacity,
    log_capacity,
    log_capacity_complement,
    log_reciprocal_snr,
    reciprocal_snr,
)
from .construction import (
    SNR_FLOOR,
    ConstructionMethod,
    FrozenSetResult,
    build_initialization,
    construct,
    construction_csv,
    evolve,
    frozen_masks,
    per_stream_snr,
    select_frozen,
)
from .ga import ga_check, ga_evolve, ga_var, phi, phi_inv_log
from .rca import XI_FIXED_POINT, lambda_log, rca_check, rca_evolve, rca_var

__all__ = [
    "GAMMA_FIXED_POINT",
    "XI_FIXED_POINT",
    "SNR_FLOOR",
    "biawgn_capacity",
    "log_capacity",
    "log_capacity_complement",
    "log_reciprocal_snr",
    "reciprocal_snr",
    "lambda_log",
    "rca_check",
    "rca_var",
    "rca_evolve",
    "phi",
    "phi_inv_log",
    "ga_check",
    "ga_var",
    "ga_evolve",
    "ConstructionMethod",
    "FrozenSetResult",
    "per_stream_snr",
    "build_initialization",
    "evolve",
    "select_frozen",
    "frozen_masks",
    "construct",
    "construction_csv",
]
