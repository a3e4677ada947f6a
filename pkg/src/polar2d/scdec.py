"""Successive cancellation decoding and a brute-force ML reference for tiny codes."""

from __future__ import annotations

import itertools

import numba
import numpy as np

from .exceptions import DimensionError
from .modem import LLR_MAX
from .polar_core import CodeConfig, assemble_input, encode_1d, is_power_of_two

__all__ = ["sc_decode", "sc_decode_batch", "ml_decode", "ML_MAX_N"]

ML_MAX_N = 16


@numba.njit(cache=True, inline="always")
def _f_exact(a, b, llr_max):
    s = min(abs(a), abs(b))
    if (a < 0.0) != (b < 0.0):
        s = -s
    v = s + np.log1p(np.exp(-abs(a + b))) - np.log1p(np.exp(-abs(a - b)))
    return min(max(v, -llr_max), llr_max)


@numba.njit(cache=True, inline="always")
def _f_minsum(a, b, llr_max):
    s = min(abs(a), abs(b))
    return -s if (a < 0.0) != (b < 0.0) else s


@numba.njit(cache=True)
def _sc_kernel(llr, frozen, out, min_sum, llr_max):
    n_frames, N = llr.shape
    n = 0
    while (1 << n) < N:
        n += 1
    alpha = np.empty((n + 1, N))
    beta = np.zeros((n + 1, N), dtype=np.uint8)
    left = np.zeros((n + 1, N), dtype=np.uint8)
    for fr in range(n_frames):
        for k in range(N):
            alpha[0, k] = min(max(llr[fr, k], -llr_max), llr_max)
        for i in range(N):
            if i == 0:
                d0 = -1
            else:
                p = 0
                while ((i >> p) & 1) == 0:
                    p += 1
                d0 = n - 1 - p
                # right child at depth d0 + 1: g-combine with the left sibling's codeword
                h = 1 << (n - d0 - 1)
                for k in range(h):
                    a = alpha[d0, k]
                    if left[d0 + 1, k]:
                        a = -a
                    alpha[d0 + 1, k] = alpha[d0, h + k] + a
            # then all the way down the left branch
            for d in range(d0 + 1, n):
                h = 1 << (n - d - 1)
                for k in range(h):
                    if min_sum:
                        alpha[d + 1, k] = _f_minsum(alpha[d, k], alpha[d, h + k], llr_max)
                    else:
                        alpha[d + 1, k] = _f_exact(alpha[d, k], alpha[d, h + k], llr_max)
            u = 0
            if not frozen[fr, i] and alpha[n, 0] < 0.0:
                u = 1
            out[fr, i] = u
            # propagate partial sums up while the finished node is a right child
            beta[n, 0] = u
            d = n
            while d > 0 and ((i >> (n - d)) & 1) == 1:
                h = 1 << (n - d)
                for k in range(h):
                    beta[d - 1, k] = left[d, k] ^ beta[d, k]
                    beta[d - 1, h + k] = beta[d, k]
                d -= 1
            if d > 0:
                h = 1 << (n - d)
                for k in range(h):
                    left[d, k] = beta[d, k]


def sc_decode_batch(llr, frozen_mask, min_sum: bool = False) -> np.ndarray:
    """SC-decode a batch of frames, each with its own frozen set.

    Parameters
    ----------
    llr : array, shape (B, N)
        Channel LLRs indexed by 1-D bit index.
    frozen_mask : bool array, shape (B, N) or (N,)
    min_sum : bool
        Use the min-sum check combine instead of the exact one.

    Returns
    -------
    uint8 array, shape (B, N)
        Decoded input vectors ``u_hat`` (frozen positions are 0).
    """
    llr = np.ascontiguousarray(llr, dtype=np.float64)
    if llr.ndim != 2 or not is_power_of_two(llr.shape[1]):
        raise DimensionError(f"expected (B, N) LLRs with N a power of two, got {llr.shape}")
    frozen = np.broadcast_to(np.asarray(frozen_mask, dtype=np.bool_), llr.shape)
    if llr.shape[1] == 1:
        return np.where(frozen, 0, llr < 0).astype(np.uint8)
    out = np.empty(llr.shape, dtype=np.uint8)
    _sc_kernel(llr, np.ascontiguousarray(frozen), out, bool(min_sum), LLR_MAX)
    return out


def sc_decode(llr, cfg: CodeConfig, min_sum: bool = False) -> np.ndarray:
    """SC-decode LLRs of shape ``(..., N)`` and return the ``K`` information bits."""
    llr = np.asarray(llr, dtype=float)
    if llr.ndim == 0 or llr.shape[-1] != cfg.n_total:
        raise DimensionError(f"expected {cfg.n_total} LLRs, got shape {llr.shape}")
    lead = llr.shape[:-1]
    u = sc_decode_batch(llr.reshape(-1, cfg.n_total), cfg.frozen_mask, min_sum)
    return u[:, cfg.info_set].reshape(lead + (cfg.k_info,))


def ml_decode(llr, cfg: CodeConfig) -> np.ndarray:
    """Exhaustive ML decoding by LLR correlation; ``N <= 16`` only.

    Ties go to the lexicographically smallest information word.

    Raises
    ------
    ValueError
        If ``N`` exceeds :data:`ML_MAX_N`.
    """
    if cfg.n_total > ML_MAX_N:
        raise ValueError(f"ML enumeration is limited to N <= {ML_MAX_N}, got N={cfg.n_total}")
    llr = np.asarray(llr, dtype=float)
    if llr.ndim == 0 or llr.shape[-1] != cfg.n_total:
        raise DimensionError(f"expected {cfg.n_total} LLRs, got shape {llr.shape}")
    words = np.array(list(itertools.product((0, 1), repeat=cfg.k_info)), dtype=np.uint8)
    codewords = encode_1d(assemble_input(words, cfg))
    score = llr @ (1.0 - 2.0 * codewords.T)
    return words[np.argmax(score, axis=-1)]
