"""Gray-labelled constellations, bit-to-symbol mapping and exact LLR demapping.

Bit layout: stream ``s`` sends the ``T`` coded bits of row ``s`` of the 2-D
codeword in temporal order; each group of ``m_b`` consecutive bits is one
symbol label, first bit most significant.  LLRs are positive when bit 0 is
more likely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from .exceptions import ConfigError

__all__ = ["Constellation", "get_constellation", "map_bits", "llr_demap", "hard_demap", "LLR_MAX"]

LLR_MAX = 60.0


@dataclass(frozen=True, eq=False)
class Constellation:
    name: str
    bits_per_symbol: int
    points: np.ndarray
    labels: np.ndarray  # (M, m_b) bit labels, row i is the label of points[i]

    @property
    def order(self) -> int:
        return self.points.size


def _pam_gray(b_sign, b_mag):
    # 2-bit Gray PAM: 00 -> +1, 01 -> +3, 10 -> -1, 11 -> -3
    return (1 - 2 * b_sign) * (2 - (1 - 2 * b_mag))


@lru_cache(maxsize=None)
def get_constellation(name: str) -> Constellation:
    """``"bpsk"``, ``"qpsk"`` or ``"16qam"`` (case-insensitive), unit average energy."""
    key = str(name).lower()
    if key == "bpsk":
        m_b = 1
    elif key == "qpsk":
        m_b = 2
    elif key in ("16qam", "qam16"):
        key, m_b = "16qam", 4
    else:
        raise ConfigError(f"unknown modulation {name!r}; expected bpsk, qpsk or 16qam")
    idx = np.arange(2**m_b)
    labels = ((idx[:, None] >> np.arange(m_b - 1, -1, -1)) & 1).astype(np.uint8)
    b = labels.astype(float)
    if m_b == 1:
        points = (1 - 2 * b[:, 0]).astype(complex)
    elif m_b == 2:
        points = ((1 - 2 * b[:, 0]) + 1j * (1 - 2 * b[:, 1])) / np.sqrt(2)
    else:
        points = (_pam_gray(b[:, 0], b[:, 1]) + 1j * _pam_gray(b[:, 2], b[:, 3])) / np.sqrt(10)
    points.setflags(write=False)
    labels.setflags(write=False)
    return Constellation(key, m_b, points, labels)


def _resolve(constellation) -> Constellation:
    return constellation if isinstance(constellation, Constellation) else get_constellation(constellation)


def map_bits(bits, constellation) -> np.ndarray:
    """Map a ``(..., S, T)`` bit array to ``(..., S, T / m_b)`` unit-energy symbols.

    Raises
    ------
    ConfigError
        If ``m_b`` does not divide ``T``.
    """
    c = _resolve(constellation)
    bits = np.asarray(bits)
    m_b = c.bits_per_symbol
    T = bits.shape[-1]
    if T % m_b:
        raise ConfigError(f"{c.name} needs T divisible by {m_b}, got T={T}")
    groups = bits.reshape(bits.shape[:-1] + (T // m_b, m_b)).astype(np.int64)
    label = groups @ (1 << np.arange(m_b - 1, -1, -1))
    return c.points[label]


def llr_demap(y, gain, es: float, n0: float, constellation, max_log: bool = False) -> np.ndarray:
    """Per-bit LLRs ``ln P(b=0|y) / P(b=1|y)`` for ``y = sqrt(es) * gain * x + n``.

    ``gain`` is the amplitude ``sqrt(lambda)`` and broadcasts against ``y``.
    The result has shape ``y.shape + (m_b,)`` and is clipped to
    ``+/- LLR_MAX``.  ``max_log`` swaps log-sum-exp for a max.
    """
    c = _resolve(constellation)
    if not n0 > 0:
        raise ValueError("noise power must be positive")
    y = np.asarray(y, dtype=complex)
    g = np.sqrt(es) * np.asarray(gain, dtype=float)
    if np.any(g < 0):
        raise ValueError("gain must be non-negative")
    if c.bits_per_symbol == 1:
        llr = (4.0 * g * y.real / n0)[..., None]
        return np.clip(llr, -LLR_MAX, LLR_MAX)
    metric = -np.abs(y[..., None] - (g[..., None] if np.ndim(g) else g) * c.points) ** 2 / n0
    out = np.empty(y.shape + (c.bits_per_symbol,))
    for j in range(c.bits_per_symbol):
        zero = c.labels[:, j] == 0
        if max_log:
            out[..., j] = metric[..., zero].max(axis=-1) - metric[..., ~zero].max(axis=-1)
        else:
            out[..., j] = logsumexp(metric[..., zero], axis=-1) - logsumexp(metric[..., ~zero], axis=-1)
    return np.clip(out, -LLR_MAX, LLR_MAX)


def hard_demap(y, gain, es: float, constellation) -> np.ndarray:
    """Nearest-point bit decisions, shape ``y.shape[:-1] + (T_sym * m_b,)``."""
    c = _resolve(constellation)
    y = np.asarray(y, dtype=complex)
    g = np.sqrt(es) * np.asarray(gain, dtype=float)
    ref = (g[..., None] if np.ndim(g) else g) * c.points
    nearest = np.argmin(np.abs(y[..., None] - ref), axis=-1)
    bits = c.labels[nearest]
    return bits.reshape(bits.shape[:-2] + (-1,))
