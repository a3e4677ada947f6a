"""Quasi-static Rayleigh MIMO channel, SVD eigenmodes and pilot-based LMMSE estimation.

Noise is ``CN(0, n0)``.  ``es`` is the per-stream symbol energy, so the
eigenmode SNRs are ``lambda_k * es / n0``.  Pilots carry per-antenna symbol
energy ``pilot_esn0 * n0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, DecompositionError, DimensionError

__all__ = [
    "ChannelRealization",
    "EigenDecomposition",
    "CsiMode",
    "CsiState",
    "complex_normal",
    "sample_channel",
    "decompose",
    "eigenvalues",
    "parallel_transmit",
    "full_transmit",
    "pilot_matrix",
    "transmit_pilots",
    "lmmse_estimate",
    "ls_estimate",
    "lmmse_error_variance",
    "estimate_channel",
]


def complex_normal(rng: np.random.Generator, shape, var: float = 1.0) -> np.ndarray:
    """Circularly symmetric complex Gaussian samples with variance ``var``."""
    z = rng.standard_normal(tuple(shape) + (2,))
    return np.sqrt(var / 2.0) * (z[..., 0] + 1j * z[..., 1])


@dataclass(frozen=True)
class ChannelRealization:
    h: np.ndarray

    def __post_init__(self):
        if self.h.ndim != 2 or self.h.shape[1] > self.h.shape[0]:
            raise DimensionError(f"expected an L x S matrix with S <= L, got {self.h.shape}")
        if not np.all(np.isfinite(self.h)):
            raise ValueError("channel matrix must be finite")

    @property
    def l_rx(self) -> int:
        return self.h.shape[0]

    @property
    def s_tx(self) -> int:
        return self.h.shape[1]


@dataclass(frozen=True)
class EigenDecomposition:
    """``H = U Sigma V^H`` with ``Sigma`` carrying ``sqrt(lambdas)`` on its diagonal."""

    u_left: np.ndarray
    lambdas: np.ndarray
    v_right: np.ndarray

    def sigma(self) -> np.ndarray:
        L, S = self.u_left.shape[-1], self.v_right.shape[-1]
        out = np.zeros((L, S))
        out[np.arange(S), np.arange(S)] = np.sqrt(self.lambdas)
        return out

    def reconstruct(self) -> np.ndarray:
        return self.u_left @ self.sigma() @ self.v_right.conj().T


def sample_channel(rng: np.random.Generator, l_rx: int, s_tx: int) -> ChannelRealization:
    """One i.i.d. ``CN(0, 1)`` channel matrix, held fixed for a codeword."""
    if not l_rx >= s_tx >= 1:
        raise ConfigError(f"need L >= S >= 1, got L={l_rx}, S={s_tx}")
    return ChannelRealization(complex_normal(rng, (l_rx, s_tx)))


def _as_matrix(h) -> np.ndarray:
    return h.h if isinstance(h, ChannelRealization) else np.asarray(h)


def decompose(h) -> EigenDecomposition:
    """Full SVD with eigenvalues of ``H H^H`` (top ``S``) in descending order.

    Raises
    ------
    DecompositionError
        If the input is not finite or LAPACK fails to converge.
    """
    h = _as_matrix(h)
    if h.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise DecompositionError("channel matrix contains non-finite entries")
    try:
        u, sv, vh = np.linalg.svd(h, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(str(exc)) from exc
    return EigenDecomposition(u_left=u, lambdas=sv**2, v_right=vh.conj().T)


def eigenvalues(h) -> np.ndarray:
    """Descending eigenvalues of ``H H^H`` (top ``S``) for a stack ``(..., L, S)``."""
    h = _as_matrix(h)
    if not np.all(np.isfinite(h)):
        raise DecompositionError("channel matrix contains non-finite entries")
    try:
        sv = np.linalg.svd(h, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(str(exc)) from exc
    return sv**2


def _lambdas_of(decomp) -> np.ndarray:
    return decomp.lambdas if isinstance(decomp, EigenDecomposition) else np.asarray(decomp)


def parallel_transmit(symbols, decomp, rng, n0: float = 1.0, es: float = 1.0, noise=None):
    """Eigenmode channel ``y_k = sqrt(lambda_k * es) x_k + n_k``.

    Parameters
    ----------
    symbols : complex array, shape (..., S, T_sym)
        Unit-energy data symbols per stream.
    decomp : EigenDecomposition or array of shape (..., S)
        Source of the eigenvalues.
    rng : Generator or None
        Noise source; ignored when ``noise`` is given.
    noise : complex array, optional
        Unit-variance noise to use instead of drawing it (scaled by ``sqrt(n0)``).
    """
    x = np.asarray(symbols)
    lam = _lambdas_of(decomp)
    if x.ndim < 2 or x.shape[-2] != lam.shape[-1]:
        raise DimensionError(f"symbols {x.shape} do not match {lam.shape[-1]} streams")
    if not n0 > 0:
        raise ValueError("noise power must be positive")
    if noise is None:
        noise = complex_normal(rng, x.shape)
    return np.sqrt(lam * es)[..., :, None] * x + np.sqrt(n0) * noise


def full_transmit(symbols, h, decomp: EigenDecomposition, rng, n0: float = 1.0, es: float = 1.0):
    """Precode with ``V``, propagate through ``H``, combine with ``U^H``; keep the S streams."""
    h = _as_matrix(h)
    x = np.asarray(symbols)
    if x.shape[0] != h.shape[1]:
        raise DimensionError(f"symbols {x.shape} do not match H {h.shape}")
    tx = np.sqrt(es) * decomp.v_right @ x
    y = h @ tx + complex_normal(rng, (h.shape[0], x.shape[1]), n0)
    return (decomp.u_left.conj().T @ y)[: h.shape[1]]


def pilot_matrix(s_tx: int, pilot_len: int) -> np.ndarray:
    """First ``S`` rows of the ``L_p``-point DFT, scaled to unit column norm.

    Raises
    ------
    ConfigError
        If ``pilot_len < s_tx``.
    """
    if pilot_len < s_tx:
        raise ConfigError(f"pilot length {pilot_len} is shorter than S={s_tx}")
    s = np.arange(s_tx)[:, None]
    t = np.arange(pilot_len)[None, :]
    return np.exp(-2j * np.pi * s * t / pilot_len) / np.sqrt(s_tx)


def transmit_pilots(h, pilot_len: int, pilot_esn0: float, noise, n0: float = 1.0):
    """Received pilot block ``Y_p = H X_p + Z_p`` and the transmitted ``X_p``.

    ``noise`` is unit-variance complex noise of shape ``(..., L, L_p)``.
    """
    h = _as_matrix(h)
    s_tx = h.shape[-1]
    x_p = np.sqrt(s_tx * pilot_esn0 * n0) * pilot_matrix(s_tx, pilot_len)
    return h @ x_p + np.sqrt(n0) * noise, x_p


def lmmse_estimate(y_p, x_p, n0: float) -> np.ndarray:
    """``H_hat = Y_p X_p^H (X_p X_p^H + n0 I)^{-1}`` under an i.i.d. ``CN(0,1)`` prior."""
    y_p, x_p = np.asarray(y_p), np.asarray(x_p)
    if y_p.shape[-1] != x_p.shape[-1]:
        raise DimensionError(f"pilot lengths differ: {y_p.shape} vs {x_p.shape}")
    if not n0 > 0:
        raise ValueError("noise power must be positive")
    gram = x_p @ x_p.conj().T + n0 * np.eye(x_p.shape[0])
    try:
        # H_hat gram = Y X^H  ->  gram^T H_hat^T = (Y X^H)^T, gram is Hermitian
        rhs = y_p @ x_p.conj().T
        return np.linalg.solve(gram.T, np.swapaxes(rhs, -1, -2)).swapaxes(-1, -2)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(str(exc)) from exc


def ls_estimate(y_p, x_p) -> np.ndarray:
    """Least-squares estimate ``Y_p X_p^H (X_p X_p^H)^{-1}``."""
    y_p, x_p = np.asarray(y_p), np.asarray(x_p)
    gram = x_p @ x_p.conj().T
    rhs = y_p @ x_p.conj().T
    return np.linalg.solve(gram.T, np.swapaxes(rhs, -1, -2)).swapaxes(-1, -2)


def lmmse_error_variance(x_p, n0: float) -> float:
    """Per-entry MSE of :func:`lmmse_estimate`: mean diagonal of ``(I + X X^H / n0)^{-1}``."""
    x_p = np.asarray(x_p)
    cov = np.linalg.inv(np.eye(x_p.shape[0]) + x_p @ x_p.conj().T / n0)
    return float(np.real(np.trace(cov)) / x_p.shape[0])


class CsiMode(str, enum.Enum):
    PERFECT = "perfect"
    ESTIMATED = "estimated"


@dataclass(frozen=True)
class CsiState:
    mode: CsiMode
    h_hat: np.ndarray | None = None
    pilot_len: int = 0
    pilot_esn0: float = 0.0

    def __post_init__(self):
        mode = CsiMode(self.mode)
        object.__setattr__(self, "mode", mode)
        if mode is CsiMode.ESTIMATED:
            if self.h_hat is None:
                raise ConfigError("estimated CSI requires h_hat")
            if self.pilot_len < self.h_hat.shape[-1]:
                raise ConfigError("estimated CSI requires pilot_len >= S")


def estimate_channel(h, rng, pilot_len: int, pilot_esn0: float, n0: float = 1.0) -> CsiState:
    """Send orthogonal pilots over ``h`` and return the LMMSE estimate as a :class:`CsiState`."""
    h = _as_matrix(h)
    noise = complex_normal(rng, (h.shape[0], pilot_len))
    y_p, x_p = transmit_pilots(h, pilot_len, pilot_esn0, noise, n0)
    return CsiState(CsiMode.ESTIMATED, lmmse_estimate(y_p, x_p, n0), pilot_len, pilot_esn0)
