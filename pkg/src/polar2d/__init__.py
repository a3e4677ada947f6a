"""Spatiotemporal 2-D polar codes with reliability-aware construction for MIMO eigenmodes."""

from . import mimo, modem, polar_core, reliability, scdec, simkit
from .estimator import SpatiotemporalPolarCode
from .exceptions import ConfigError, DecompositionError, DimensionError
from .polar_core import CodeConfig, assemble_input, encode_1d, encode_2d, extract_info, index_map, index_unmap
from .scdec import ml_decode, sc_decode, sc_decode_batch

__version__ = "0.1.0"

__all__ = [
    "mimo",
    "modem",
    "polar_core",
    "reliability",
    "scdec",
    "simkit",
    "SpatiotemporalPolarCode",
    "CodeConfig",
    "ConfigError",
    "DimensionError",
    "DecompositionError",
    "encode_1d",
    "encode_2d",
    "index_map",
    "index_unmap",
    "assemble_input",
    "extract_info",
    "sc_decode",
    "sc_decode_batch",
    "ml_decode",
]
