"""Binary polar transforms in 1-D and spatiotemporal 2-D form.

Conventions used everywhere in the package:

* The 1-D codeword is ``x = u @ F_N (mod 2)`` with ``u`` a row vector and
  ``F_N = F^{(x)n}``, ``F = [[1, 0], [1, 1]]``, in natural (non bit-reversed)
  order.
* A 2-D array ``U`` of shape ``(S, T)`` is vectorised row-major, so bit
  ``(s, t)`` sits at 1-D index ``s*T + t``.  Under this layout the 2-D
  transform that agrees with the 1-D one is ``F_S.T @ U @ F_T``.
* Frozen bits carry the value 0.

All functions accept arbitrary leading batch dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigError, DimensionError

__all__ = [
    "CodeConfig",
    "is_power_of_two",
    "encode_1d",
    "encode_2d",
    "index_map",
    "index_unmap",
    "assemble_input",
    "extract_info",
    "generator_matrix",
]


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class CodeConfig:
    """Dimensions and frozen set of a spatiotemporal 2-D polar code.

    Parameters
    ----------
    s_streams : int
        Number of spatial streams ``S`` (power of two).
    t_slots : int
        Temporal blocklength ``T`` (power of two).
    frozen_set : sequence of int
        Frozen 1-D bit indices in ``[0, S*T)``.  Stored sorted.
    """

    s_streams: int
    t_slots: int
    frozen_set: tuple = field(default=())

    def __post_init__(self):
        if not is_power_of_two(self.s_streams) or not is_power_of_two(self.t_slots):
            raise ConfigError(
                f"S and T must be powers of two, got S={self.s_streams}, T={self.t_slots}"
            )
        fs = self.frozen_set
        if isinstance(fs, (set, frozenset)):
            fs = sorted(fs)
        frozen = np.asarray(fs, dtype=np.int64).ravel()
        n = self.s_streams * self.t_slots
        if frozen.size and (frozen.min() < 0 or frozen.max() >= n):
            raise ConfigError(f"frozen indices must lie in [0, {n})")
        if np.unique(frozen).size != frozen.size:
            raise ConfigError("frozen indices must be distinct")
        if frozen.size >= n:
            raise ConfigError("at least one information bit is required (K > 0)")
        object.__setattr__(self, "frozen_set", tuple(int(i) for i in np.sort(frozen)))

    @property
    def n_total(self) -> int:
        return self.s_streams * self.t_slots

    @property
    def k_info(self) -> int:
        return self.n_total - len(self.frozen_set)

    @property
    def frozen_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_total, dtype=bool)
        mask[list(self.frozen_set)] = True
        return mask

    @property
    def info_set(self) -> np.ndarray:
        """Information positions in ascending index order."""
        return np.flatnonzero(~self.frozen_mask)


def _as_bits(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == bool:
        return a.astype(np.uint8)
    if not np.issubdtype(a.dtype, np.integer):
        raise TypeError(f"expected an integer bit array, got dtype {a.dtype}")
    if a.size and (a.min() < 0 or a.max() > 1):
        raise ValueError("bit arrays may only contain 0 and 1")
    return a.astype(np.uint8)


def _butterfly(x: np.ndarray, axis: int) -> np.ndarray:
    """In-place natural-order polar transform of ``x`` along ``axis``."""
    x = np.moveaxis(x, axis, -1)
    n = x.shape[-1]
    lead = x.shape[:-1]
    h = 1
    while h < n:
        v = x.reshape(lead + (n // (2 * h), 2, h))
        v[..., 0, :] ^= v[..., 1, :]
        h *= 2
    return np.moveaxis(x, -1, axis)


def encode_1d(u) -> np.ndarray:
    """Return ``u @ F_N`` over GF(2) in O(N log N).

    Raises
    ------
    DimensionError
        If the last axis is not a power of two.
    """
    u = _as_bits(u)
    if u.ndim == 0 or not is_power_of_two(u.shape[-1]):
        raise DimensionError(f"codeword length must be a power of two, got shape {u.shape}")
    return np.ascontiguousarray(_butterfly(u.copy(), -1))


def encode_2d(U, s_streams: int | None = None, t_slots: int | None = None) -> np.ndarray:
    """Spatiotemporal encoder ``F_S.T @ U @ F_T`` on arrays of shape ``(..., S, T)``."""
    U = _as_bits(U)
    if U.ndim < 2:
        raise DimensionError("encode_2d expects an array of shape (..., S, T)")
    S, T = U.shape[-2:]
    if (s_streams is not None and S != s_streams) or (t_slots is not None and T != t_slots):
        raise DimensionError(f"expected shape (..., {s_streams}, {t_slots}), got {U.shape}")
    if not (is_power_of_two(S) and is_power_of_two(T)):
        raise DimensionError(f"S and T must be powers of two, got {S}x{T}")
    X = U.copy()
    X = _butterfly(X, -2)
    X = _butterfly(X, -1)
    return np.ascontiguousarray(X)


def index_map(s, t, s_streams: int, t_slots: int):
    """Map 2-D position ``(stream, slot)`` to 1-D bit index ``s*T + t``."""
    s_arr, t_arr = np.asarray(s), np.asarray(t)
    if np.any((s_arr < 0) | (s_arr >= s_streams)) or np.any((t_arr < 0) | (t_arr >= t_slots)):
        raise IndexError(f"(s, t) out of range for S={s_streams}, T={t_slots}")
    out = s_arr * t_slots + t_arr
    return int(out) if out.ndim == 0 else out


def index_unmap(i, s_streams: int, t_slots: int):
    """Inverse of :func:`index_map`; returns ``(s, t)``."""
    i_arr = np.asarray(i)
    if np.any((i_arr < 0) | (i_arr >= s_streams * t_slots)):
        raise IndexError(f"index out of range for N={s_streams * t_slots}")
    s, t = np.divmod(i_arr, t_slots)
    if i_arr.ndim == 0:
        return int(s), int(t)
    return s, t


def assemble_input(info_bits, cfg: CodeConfig) -> np.ndarray:
    """Place ``info_bits`` on the non-frozen positions (ascending) of a length-N input."""
    info_bits = _as_bits(info_bits)
    if info_bits.ndim == 0 or info_bits.shape[-1] != cfg.k_info:
        raise DimensionError(f"expected {cfg.k_info} information bits, got shape {info_bits.shape}")
    u = np.zeros(info_bits.shape[:-1] + (cfg.n_total,), dtype=np.uint8)
    u[..., cfg.info_set] = info_bits
    return u


def extract_info(u, cfg: CodeConfig) -> np.ndarray:
    """Read the information bits back out of a length-N input vector."""
    u = np.asarray(u)
    if u.ndim == 0 or u.shape[-1] != cfg.n_total:
        raise DimensionError(f"expected length {cfg.n_total}, got shape {u.shape}")
    return u[..., cfg.info_set]


def generator_matrix(n_total: int) -> np.ndarray:
    """Explicit ``F^{(x)n}``; only meant for tests and tiny codes."""
    if not is_power_of_two(n_total):
        raise DimensionError("N must be a power of two")
    return encode_1d(np.eye(n_total, dtype=np.uint8))
