"""Reciprocal channel approximation (RCA) in the log-SNR domain.

The BI-AWGN capacity is modelled as ``C(g) = 1 - exp(-g * (1 + r(g)))`` with
a small rational correction ``r``.  Writing ``phi(xi) = xi + ln(1 + r(e^xi))``
for the resulting log-log complement, the reciprocal map becomes

    Lambda(xi) = phi^{-1}(tau(phi(xi))),   tau(v) = ln(-ln(1 - exp(-e^v)))

``tau`` is an exact involution and ``phi - xi`` has slope below 0.07 in
magnitude, so ``phi^{-1}`` is a short fixed-point iteration.  The model is
therefore an involution by construction, with its fixed point where
``phi(xi) = ln ln 2``.  Fitted against the quadrature oracle, the error is
below 6e-3 nats for ``|xi| <= 6``.
"""

from __future__ import annotations

import numpy as np

from ..exceptions import DimensionError
from ..polar_core import is_power_of_two

__all__ = [
    "lambda_log",
    "rca_check",
    "rca_var",
    "rca_evolve",
    "XI_FIXED_POINT",
    "XI_CLAMP",
]

XI_CLAMP = 700.0
"""Upper log-SNR saturation bound for ``lambda_log`` (``e^xi`` must stay finite)."""

# r(g) -> 1/ln2 - 1 as g -> 0 and ~ (0.5 ln g + c_inf) / g as g -> inf.
_R0 = 1.0 / np.log(2.0) - 1.0
_C_INF = -0.5 * np.log(np.pi) + np.log(2.0 * np.log(2.0))
_LOG_Q = 0.358119
_S1 = -0.312455
_P1 = _C_INF - 0.5 * _LOG_Q
_Q = float(np.exp(_LOG_Q))
_INVERSE_ITERATIONS = 12


def _log1p_r(xi: np.ndarray) -> np.ndarray:
    """``ln(1 + r(e^xi))`` evaluated without overflow at either end."""
    a = np.abs(xi)
    e = np.exp(-a)
    pos = xi > 0.0
    # For xi > 0 numerator and denominator are scaled by e^{-2 xi};
    # the denominator keeps the same form either way.
    log_term = np.log(np.where(pos, _Q + e, 1.0 + _Q * e)) + np.where(pos, a, 0.0)
    num = np.where(
        pos,
        e * (_R0 * e + _P1 + 0.5 * log_term),
        _R0 + e * (_P1 + 0.5 * log_term),
    )
    return np.log1p(num / (1.0 + e * (_S1 + e)))


def _phi(xi):
    return xi + _log1p_r(xi)


def _phi_inv(v):
    x = v.copy()
    for _ in range(_INVERSE_ITERATIONS):
        x = v - _log1p_r(x)
    return x


def _tau(v):
    # ln(-ln(1 - exp(-w))), w = e^v, in three numerically safe regimes.
    out = np.empty_like(v)
    lo = v < -20.0
    hi = v > np.log(700.0)
    mid = ~(lo | hi)
    w_lo = np.exp(v[lo])
    out[lo] = np.log(-v[lo] + 0.5 * w_lo)
    out[hi] = -np.exp(v[hi])
    w = np.exp(v[mid])
    out[mid] = np.where(
        w < 1.0,
        np.log(-np.log(-np.expm1(-np.minimum(w, 1.0)))),
        np.log(-np.log1p(-np.exp(-np.maximum(w, 1.0)))),
    )
    return out


def lambda_log(xi):
    """Closed-form ``Lambda(xi) ~= ln Psi(e^xi)``; strictly decreasing.

    Accepts scalars or arrays.  Inputs above ``XI_CLAMP`` are clipped to it;
    very negative inputs need no clamp because ``Lambda(xi) ~ ln(-xi)`` there.
    """
    arr = np.clip(np.asarray(xi, dtype=float), -np.finfo(float).max, XI_CLAMP)
    flat = np.atleast_1d(arr).ravel()
    out = _phi_inv(_tau(_phi(flat))).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


XI_FIXED_POINT = float(_phi_inv(np.array([np.log(np.log(2.0))]))[0])
"""Log-SNR at which ``lambda_log`` is its own image."""


def rca_var(xi0, xi1):
    """Variable-node update ``ln(e^xi0 + e^xi1)``."""
    return np.logaddexp(xi0, xi1)


def rca_check(xi0, xi1):
    """Check-node update: a variable-node update on the reciprocal channels."""
    if xi0 is xi1:
        return lambda_log(lambda_log(xi0) + np.log(2.0))
    return lambda_log(np.logaddexp(lambda_log(xi0), lambda_log(xi1)))


def rca_evolve(init) -> np.ndarray:
    """Propagate log-SNRs through the natural-order polarisation tree.

    ``init`` has shape ``(..., N)``.  At every level the first half of each
    block becomes the check-node combination of the pair ``(i, i + half)``
    and the second half the variable-node combination, which matches the
    encoder in :mod:`polar2d.polar_core` and the SC decoder schedule.
    Output index ``i`` holds the reliability of synthesised channel ``i``.
    """
    xi = np.array(init, dtype=float)
    if xi.ndim == 0 or not is_power_of_two(xi.shape[-1]):
        raise DimensionError(f"length must be a power of two, got shape {xi.shape}")
    lead, n = xi.shape[:-1], xi.shape[-1]
    half = n // 2
    blocks = 1
    while half >= 1:
        v = xi.reshape(lead + (blocks, 2, half))
        a, b = v[..., 0, :], v[..., 1, :]
        lam = lambda_log(v)
        chk = lambda_log(np.logaddexp(lam[..., 0, :], lam[..., 1, :]))
        var = np.logaddexp(a, b)
        xi = np.stack([chk, var], axis=-2).reshape(lead + (n,))
        blocks *= 2
        half //= 2
    return xi
