"""Gaussian-approximation (GA) density evolution for polar construction.

LLR densities are tracked by their mean ``m`` only, with variance ``2m``.
The check-node update uses the classical ``phi`` function

    phi(m) = 1 - E[tanh(L/2)],  L ~ N(m, 2m)

approximated piecewise:

* ``m < M_POLY``: ``1 - m/2 + m^2/4`` (second-order expansion at 0)
* ``M_POLY <= m < 10``: ``exp(-0.4527 m^0.86 + 0.0218)``
* ``m >= 10``: ``sqrt(pi/m) exp(-m/4) (1 - 10/(7m))``

``M_POLY`` is where the first two pieces cross, so ``phi`` is continuous
there and ``phi(0) = 1`` exactly.  Large means are handled through
``ln phi`` so that deep check-node chains never underflow.
"""

from __future__ import annotations

import numpy as np
from scipy import optimize

from ..exceptions import DimensionError
from ..polar_core import is_power_of_two

__all__ = ["phi", "log_phi", "phi_inv_log", "ga_check", "ga_var", "ga_evolve", "M_POLY"]

_A, _B, _C = 0.4527, 0.86, 0.0218
_M_SPLIT = 10.0


def _poly(m):
    return 1.0 - m / 2.0 + m * m / 4.0


def _chung_small(m):
    return np.exp(-_A * m**_B + _C)


def _log_chung_large(m):
    return 0.5 * np.log(np.pi / m) - m / 4.0 + np.log1p(-10.0 / (7.0 * m))


M_FLOOR = 1e-300
"""Smallest mean produced by the check-node update."""

M_POLY = float(optimize.brentq(lambda m: _poly(m) - _chung_small(m), 0.15, 0.5, xtol=1e-15))

_LOG_PHI_SPLIT_SMALL = float(np.log(_chung_small(_M_SPLIT)))
_PHI_POLY = float(_poly(M_POLY))


def log_phi(m):
    """``ln phi(m)`` for ``m >= 0`` (vectorised)."""
    m = np.asarray(m, dtype=float)
    out = np.empty_like(m)
    a = m < M_POLY
    b = (m >= M_POLY) & (m < _M_SPLIT)
    c = m >= _M_SPLIT
    out[a] = np.log(_poly(m[a]))
    out[b] = -_A * m[b] ** _B + _C
    out[c] = _log_chung_large(m[c])
    return out


def phi(m):
    """Piecewise approximation of ``1 - E[tanh(L/2)]``, ``L ~ N(m, 2m)``."""
    out = np.exp(log_phi(m))
    return float(out) if np.ndim(out) == 0 else out


def _one_minus_phi(m, log_p):
    # 1 - phi(m) without cancellation for small m.
    return np.where(m < M_POLY, m * (2.0 - m) / 4.0, -np.expm1(log_p))


def _phi_inv(t, d):
    # t = ln y, d = 1 - y (both supplied so neither end loses precision)
    out = np.empty_like(t)
    a = d <= 1.0 - _PHI_POLY
    b = (~a) & (t >= _LOG_PHI_SPLIT_SMALL)
    c = t < _LOG_PHI_SPLIT_SMALL
    # m = 1 - sqrt(1 - 4d), rationalised
    out[a] = 4.0 * d[a] / (1.0 + np.sqrt(np.maximum(1.0 - 4.0 * d[a], 0.0)))
    out[b] = ((_C - t[b]) / _A) ** (1.0 / _B)
    tc = t[c]
    # Newton on the large-mean branch, started from the leading-order guess.
    m = np.maximum(_M_SPLIT, -4.0 * tc)
    for _ in range(60):
        f = _log_chung_large(m) - tc
        k = 10.0 / (7.0 * m)
        df = -0.5 / m - 0.25 + (k / m) / (1.0 - k)
        step = f / df
        m = np.maximum(m - step, _M_SPLIT)
        if np.all(np.abs(step) <= 1e-12 * m):
            break
    out[c] = m
    return np.maximum(out, M_FLOOR)


def phi_inv_log(log_y):
    """Mean ``m`` with ``ln phi(m) = log_y``; ``log_y <= 0``."""
    t = np.minimum(np.asarray(log_y, dtype=float), 0.0)
    return _phi_inv(t, -np.expm1(t))


def ga_var(m0, m1):
    return np.asarray(m0) + np.asarray(m1)


def ga_check(m0, m1):
    """Check-node mean ``phi^{-1}(1 - (1 - phi(m0))(1 - phi(m1)))``."""
    m0, m1 = np.asarray(m0, dtype=float), np.asarray(m1, dtype=float)
    l0, l1 = log_phi(m0), log_phi(m1)
    d = _one_minus_phi(m0, l0) * _one_minus_phi(m1, l1)
    # ln(p0 + p1 - p0 p1); via log1p(-d) unless y itself is small
    lse = np.logaddexp(l0, l1)
    with np.errstate(divide="ignore"):
        log_y = np.where(
            d < 0.5, np.log1p(-np.minimum(d, 0.5)), lse + np.log1p(-np.exp(l0 + l1 - lse))
        )
    return _phi_inv(log_y, d)


def ga_evolve(init_means, uniform: bool = False) -> np.ndarray:
    """GA density evolution over the natural-order polarisation tree.

    Parameters
    ----------
    init_means : array_like, shape (..., N)
        Channel LLR means (``4 * gamma`` for BPSK).
    uniform : bool
        Replace every position by the arithmetic mean of ``init_means``
        (per leading index) before evolving, i.e. the equal-reliability
        assumption.

    Returns
    -------
    ndarray, shape (..., N)
        Equivalent log-SNRs ``ln(m / 4)`` of the synthesised channels.
    """
    m = np.array(init_means, dtype=float)
    if m.ndim == 0 or not is_power_of_two(m.shape[-1]):
        raise DimensionError(f"length must be a power of two, got shape {m.shape}")
    if np.any(~(m > 0)):
        raise ValueError("LLR means must be positive")
    if uniform:
        m = np.broadcast_to(m.mean(axis=-1, keepdims=True), m.shape).copy()
    lead, n = m.shape[:-1], m.shape[-1]
    half, blocks = n // 2, 1
    while half >= 1:
        v = m.reshape(lead + (blocks, 2, half))
        chk = ga_check(v[..., 0, :], v[..., 1, :])
        var = v[..., 0, :] + v[..., 1, :]
        m = np.stack([chk, var], axis=-2).reshape(lead + (n,))
        blocks *= 2
        half //= 2
    return np.log(m / 4.0)
