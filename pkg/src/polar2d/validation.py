"""Input checks shared by the estimator façade and the CLI."""

from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .exceptions import DimensionError

__all__ = ["check_snr_profile", "check_bit_rows", "check_llr_rows"]


def check_snr_profile(x, s_streams: int | None = None) -> np.ndarray:
    """Return a positive, finite per-stream SNR vector (linear scale).

    Accepts shape ``(S,)`` or ``(1, S)``.
    """
    arr = check_array(np.atleast_2d(np.asarray(x, dtype=float)), ensure_2d=True)
    if arr.shape[0] != 1:
        raise DimensionError(f"expected a single SNR profile, got {arr.shape[0]} rows")
    arr = arr[0]
    if s_streams is not None and arr.size != s_streams:
        raise DimensionError(f"expected {s_streams} stream SNRs, got {arr.size}")
    if np.any(arr <= 0):
        raise ValueError("stream SNRs must be positive")
    return arr


def check_bit_rows(x, width: int) -> np.ndarray:
    """2-D ``uint8`` array of 0/1 entries with ``width`` columns."""
    arr = check_array(x, dtype=None, ensure_2d=False)
    arr = np.atleast_2d(arr)
    if arr.shape[1] != width:
        raise DimensionError(f"expected {width} bits per row, got {arr.shape[1]}")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bit arrays may only contain 0 and 1")
    return arr.astype(np.uint8)


def check_llr_rows(x, width: int) -> np.ndarray:
    """2-D finite float array with ``width`` columns."""
    arr = np.atleast_2d(check_array(x, dtype=np.float64, ensure_2d=False))
    if arr.shape[1] != width:
        raise DimensionError(f"expected {width} LLRs per row, got {arr.shape[1]}")
    return arr
