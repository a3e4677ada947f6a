"""Numerical reference for the binary-input AWGN capacity and its reciprocal map.

These routines are slow and accurate; they serve as the oracle that the
closed-form log-domain map in :mod:`polar2d.reliability.rca` is checked
against.  The SNR ``gamma`` is ``Es/N0`` with complex noise, so the channel
LLR of a BPSK symbol is Gaussian with mean ``4*gamma`` and variance
``8*gamma``.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate, optimize

__all__ = [
    "biawgn_capacity",
    "log_capacity",
    "log_capacity_complement",
    "reciprocal_snr",
    "log_reciprocal_snr",
    "GAMMA_FIXED_POINT",
    "LOG_SNR_BOUNDS",
]

_LN2 = np.log(2.0)
_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite_e.hermegauss(160)
_GH_WEIGHTS = _GH_WEIGHTS / np.sqrt(2.0 * np.pi)
_SERIES_K = np.arange(1, 48)

# Above this SNR the complement is taken from its large-SNR expansion,
# whose relative error in ln(1 - C) is below 1e-6 there.
_ASYMPTOTIC_GAMMA = 1.0e6

LOG_SNR_BOUNDS = (-700.0, 700.0)
"""Saturation bounds (nats) for every log-SNR handled by the oracle."""


def _binary_entropy_gap(delta: np.ndarray) -> np.ndarray:
    """``(1+d)ln(1+d) + (1-d)ln(1-d)`` without cancellation for small ``d``."""
    d = np.abs(delta)
    out = np.empty_like(d)
    small = d < 0.5
    ds = d[small][:, None]
    out[small] = np.sum(ds ** (2 * _SERIES_K) / (_SERIES_K * (2 * _SERIES_K - 1)), axis=1)
    db = d[~small]
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~small] = np.where(
            db < 1.0, (1 + db) * np.log1p(db) + (1 - db) * np.log1p(-db), 2 * _LN2
        )
    return out


def _capacity_gh(gamma: float) -> float:
    # C = E[1 - h2(1 / (1 + e^{|L|}))], written as a sum of positive terms.
    mu = 4.0 * gamma
    llr = mu + np.sqrt(2.0 * mu) * _GH_NODES
    return float(np.sum(_GH_WEIGHTS * _binary_entropy_gap(np.tanh(llr / 2)))) / (2 * _LN2)


def _log_complement_quad(gamma: float) -> float:
    # 1 - C = E[log2(1 + e^{-L})].  Tilting the LLR density by e^{-L/2}
    # recentres the integrand at L = 0 and pulls out the factor e^{-mu/4}.
    mu = 4.0 * gamma
    sd = np.sqrt(2.0 * mu)

    def integrand(z):
        if z > 30.0:
            log_f = -z + np.log1p(-0.5 * np.exp(-z))
        elif z > -30.0:
            log_f = np.log(np.log1p(np.exp(-z)))
        else:
            log_f = np.log(-z + np.log1p(np.exp(z)))
        return np.exp(-0.5 * (z / sd) ** 2 + 0.5 * z + log_f) / (sd * np.sqrt(2 * np.pi))

    lim = min(60.0 * sd, 4000.0)
    knots = sorted({-lim, -20.0, -5.0, 0.0, 5.0, 20.0, lim})
    knots = [k for k in knots if -lim <= k <= lim]
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        total += integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-12, limit=200)[0]
    return -mu / 4.0 + np.log(total) - np.log(_LN2)


def _check_gamma(gamma) -> float:
    gamma = float(gamma)
    if not gamma >= 0.0:
        raise ValueError(f"SNR must be non-negative, got {gamma}")
    return gamma


def log_capacity_complement(gamma) -> float:
    """``ln(1 - C(gamma))``, accurate far into the high-SNR tail."""
    gamma = _check_gamma(gamma)
    if gamma == 0.0:
        return 0.0
    if gamma < 1.0:
        return float(np.log1p(-_capacity_gh(gamma)))
    if gamma >= _ASYMPTOTIC_GAMMA:
        return -gamma + 0.5 * np.log(np.pi / gamma) - np.log(2 * _LN2)
    return float(_log_complement_quad(gamma))


def biawgn_capacity(gamma) -> float:
    """Capacity in bits of BPSK over complex AWGN at linear SNR ``gamma``.

    Quadrature over the LLR density N(4*gamma, 8*gamma): 160-node
    Gauss-Hermite below ``gamma = 1``, adaptive quadrature of the
    complement above it.

    Raises
    ------
    ValueError
        If ``gamma`` is negative or NaN.
    """
    gamma = _check_gamma(gamma)
    if gamma == 0.0:
        return 0.0
    if np.isinf(gamma):
        return 1.0
    if gamma < 1.0:
        return _capacity_gh(gamma)
    return float(-np.expm1(log_capacity_complement(gamma)))


def log_capacity(gamma) -> float:
    """``ln C(gamma)``, accurate for tiny ``gamma``."""
    gamma = _check_gamma(gamma)
    if gamma == 0.0:
        return -np.inf
    if gamma < 1.0:
        return float(np.log(_capacity_gh(gamma)))
    return float(np.log1p(-np.exp(log_capacity_complement(gamma))))


def log_reciprocal_snr(xi: float, xtol: float = 1e-12) -> float:
    """``ln Psi(e^xi)`` by bisection on the capacity complementarity.

    Solves ``C(Psi) = 1 - C(e^xi)`` in log form on the log-SNR axis.  Inputs
    and outputs are clamped to :data:`LOG_SNR_BOUNDS`.
    """
    lo, hi = LOG_SNR_BOUNDS
    xi = float(np.clip(xi, lo, hi))
    target = log_capacity_complement(np.exp(xi))

    def gap(z):
        return log_capacity(np.exp(z)) - target

    if gap(lo) >= 0.0:
        return lo
    if gap(hi) <= 0.0:
        return hi
    return float(optimize.bisect(gap, lo, hi, xtol=xtol, maxiter=200))


def reciprocal_snr(gamma) -> float:
    """Reciprocal-channel SNR ``Psi(gamma)`` with ``C(Psi) = 1 - C(gamma)``.

    Raises
    ------
    ValueError
        If ``gamma`` is not strictly positive.
    """
    gamma = float(gamma)
    if not gamma > 0.0:
        raise ValueError(f"SNR must be positive, got {gamma}")
    return float(np.exp(log_reciprocal_snr(np.log(gamma))))


def _fixed_point() -> float:
    return float(optimize.brentq(lambda g: biawgn_capacity(g) - 0.5, 0.1, 2.0, xtol=1e-14))


GAMMA_FIXED_POINT = _fixed_point()
"""SNR at which the BI-AWGN capacity equals one half (``Psi`` fixes it)."""
