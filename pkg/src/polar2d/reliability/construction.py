"""Reliability-aware frozen-set construction for spatiotemporal polar codes."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass

import numpy as np

from ..exceptions import DimensionError
from ..polar_core import CodeConfig, index_unmap, is_power_of_two
from .ga import ga_check, ga_evolve, ga_var
from .rca import rca_check, rca_evolve, rca_var

__all__ = [
    "ConstructionMethod",
    "FrozenSetResult",
    "SNR_FLOOR",
    "per_stream_snr",
    "build_initialization",
    "evolve",
    "select_frozen",
    "frozen_masks",
    "construct",
    "construction_csv",
]

SNR_FLOOR = 1e-12


class ConstructionMethod(str, enum.Enum):
    RCA = "rca"
    GA_NONUNIFORM = "ga_nonuniform"
    GA_UNIFORM = "ga_uniform"

    @classmethod
    def parse(cls, value) -> "ConstructionMethod":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown construction {value!r}; expected one of {[m.value for m in cls]}"
            ) from None


@dataclass(frozen=True)
class FrozenSetResult:
    """Outcome of a construction.

    Attributes
    ----------
    order : ndarray of int
        All bit indices from most to least reliable.
    frozen_set : ndarray of int
        The ``N - K`` least reliable indices, ascending.
    reliabilities : ndarray of float
        Log-domain reliability per bit index.
    """

    order: np.ndarray
    frozen_set: np.ndarray
    reliabilities: np.ndarray

    def code_config(self, s_streams: int, t_slots: int) -> CodeConfig:
        return CodeConfig(s_streams, t_slots, tuple(self.frozen_set.tolist()))


def per_stream_snr(lambdas, esn0) -> np.ndarray:
    """``gamma_k = lambda_k * Es/N0``, floored at :data:`SNR_FLOOR`.

    Raises
    ------
    ValueError
        On a negative eigenvalue or a non-positive ``esn0``.
    """
    lam = np.asarray(lambdas, dtype=float)
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise ValueError("eigenvalues must be finite and non-negative")
    if not esn0 > 0:
        raise ValueError(f"Es/N0 must be positive, got {esn0}")
    return np.maximum(lam * esn0, SNR_FLOOR)


def build_initialization(gammas, t_slots: int) -> np.ndarray:
    """Length-``S*T`` log-SNR vector with ``ln gamma_s`` at every index of stream ``s``.

    With the row-major bijection ``i = s*T + t`` each stream's value fills a
    contiguous run of ``T`` positions.  Works on ``(..., S)`` arrays.
    """
    g = np.asarray(gammas, dtype=float)
    if g.ndim == 0 or not is_power_of_two(g.shape[-1]):
        raise DimensionError(f"expected S (power of two) stream SNRs, got shape {g.shape}")
    if not is_power_of_two(t_slots):
        raise DimensionError(f"T must be a power of two, got {t_slots}")
    if np.any(~(g > 0)) or not np.all(np.isfinite(g)):
        raise ValueError("stream SNRs must be positive and finite")
    return np.repeat(np.log(g), t_slots, axis=-1)


def _kron_evolve(v0: np.ndarray, t_slots: int, check, var) -> np.ndarray:
    # Initialisation is (stream values) x (all-ones over T).  The first
    # log2(S) stages pair streams at equal slots, so they act on the length-S
    # profile alone; every later stage splits a constant block into two
    # constant halves.  Same arithmetic as the full tree, far fewer nodes.
    v = v0
    lead, s_streams = v.shape[:-1], v.shape[-1]
    half, blocks = s_streams // 2, 1
    while half >= 1:
        w = v.reshape(lead + (blocks, 2, half))
        v = np.stack(
            [check(w[..., 0, :], w[..., 1, :]), var(w[..., 0, :], w[..., 1, :])], axis=-2
        ).reshape(lead + (s_streams,))
        blocks *= 2
        half //= 2
    w = v[..., None]
    while w.shape[-1] < t_slots:
        w = np.stack([check(w, w), var(w, w)], axis=-1).reshape(lead + (s_streams, -1))
    return w.reshape(lead + (s_streams * t_slots,))


def evolve(gammas, t_slots: int, method) -> np.ndarray:
    """Synthesised-channel log-reliabilities for the given stream SNRs.

    Equivalent to running :func:`rca_evolve` / :func:`ga_evolve` on
    :func:`build_initialization` output, but exploits the replicated layout.
    """
    method = ConstructionMethod.parse(method)
    xi_sp = build_initialization(gammas, 1)
    if method is ConstructionMethod.RCA:
        return _kron_evolve(xi_sp, t_slots, rca_check, rca_var)
    m = 4.0 * np.exp(xi_sp)
    if method is ConstructionMethod.GA_UNIFORM:
        m = np.broadcast_to(m.mean(axis=-1, keepdims=True), m.shape)
    return np.log(_kron_evolve(m, t_slots, ga_check, ga_var) / 4.0)


def _order(rel: np.ndarray) -> np.ndarray:
    # Descending reliability; among exact ties the larger index ranks higher,
    # so the smaller index is frozen first.
    n = rel.shape[-1]
    rev = np.argsort(-rel[..., ::-1], axis=-1, kind="stable")
    return (n - 1) - rev


def select_frozen(rel, k_info: int) -> FrozenSetResult:
    rel = np.asarray(rel, dtype=float)
    if rel.ndim != 1:
        raise DimensionError("select_frozen expects a single reliability vector")
    n = rel.size
    if not 0 < k_info <= n:
        raise ValueError(f"K must satisfy 0 < K <= N={n}, got {k_info}")
    order = _order(rel)
    return FrozenSetResult(order=order, frozen_set=np.sort(order[k_info:]), reliabilities=rel)


def frozen_masks(rel, k_info: int) -> np.ndarray:
    """Batched frozen-set selection: boolean masks of shape ``(..., N)``."""
    rel = np.asarray(rel, dtype=float)
    n = rel.shape[-1]
    if not 0 < k_info <= n:
        raise ValueError(f"K must satisfy 0 < K <= N={n}, got {k_info}")
    order = _order(rel)
    mask = np.zeros(rel.shape, dtype=bool)
    np.put_along_axis(mask, order[..., k_info:], True, axis=-1)
    return mask


def construct(gammas, t_slots: int, k_info: int, method="rca") -> FrozenSetResult:
    """Stream SNRs in, frozen set out."""
    return select_frozen(evolve(gammas, t_slots, method), k_info)


def construction_csv(result: FrozenSetResult, s_streams: int, t_slots: int) -> str:
    """CSV with columns ``index, stream, slot, xi_hat, rank, frozen``."""
    n = s_streams * t_slots
    rank = np.empty(n, dtype=np.int64)
    rank[result.order] = np.arange(n)
    frozen = np.zeros(n, dtype=np.int64)
    frozen[result.frozen_set] = 1
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "stream", "slot", "xi_hat", "rank", "frozen"])
    for i in range(n):
        s, t = index_unmap(i, s_streams, t_slots)
        w.writerow([i, s, t, repr(float(result.reliabilities[i])), int(rank[i]), int(frozen[i])])
    return buf.getvalue()
