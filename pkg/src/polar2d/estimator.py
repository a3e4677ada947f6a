"""scikit-learn style façade over construction, encoding and SC decoding."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import ConfigError
from .polar_core import CodeConfig, encode_2d, is_power_of_two
from .reliability import ConstructionMethod, construct
from .scdec import sc_decode_batch
from .validation import check_bit_rows, check_llr_rows, check_snr_profile

__all__ = ["SpatiotemporalPolarCode"]


class SpatiotemporalPolarCode(TransformerMixin, BaseEstimator):
    """2-D polar code whose frozen set is fitted to a per-stream SNR profile.

    Parameters
    ----------
    t_slots : int
        Time slots ``T`` (power of two).
    rate : float
        ``K / N``; ``K = round(rate * S * T)``.
    construction : {"rca", "ga_nonuniform", "ga_uniform"}
    min_sum : bool
        Use the min-sum check combine when decoding.

    Attributes
    ----------
    code_config_ : CodeConfig
    reliabilities_ : ndarray of shape (N,)
    order_ : ndarray of shape (N,)
        Bit indices from most to least reliable.

    Examples
    --------
    >>> code = SpatiotemporalPolarCode(t_slots=8).fit([20.0, 5.0])
    >>> x = code.transform(np.zeros((1, code.k_info_), dtype=np.uint8))
    >>> x.shape
    (1, 16)
    """

    def __init__(self, t_slots: int = 32, rate: float = 0.5, construction: str = "rca", min_sum: bool = False):
        self.t_slots = t_slots
        self.rate = rate
        self.construction = construction
        self.min_sum = min_sum

    def fit(self, X, y=None):
        """Build the frozen set from per-stream SNRs ``X`` (linear, shape ``(S,)`` or ``(1, S)``)."""
        gammas = check_snr_profile(X)
        s = gammas.size
        if not is_power_of_two(s) or not is_power_of_two(self.t_slots):
            raise ConfigError("S and T must be powers of two")
        n = s * self.t_slots
        k = int(round(self.rate * n))
        if not 0 < k <= n:
            raise ConfigError(f"rate {self.rate} gives K={k} for N={n}")
        res = construct(gammas, self.t_slots, k, ConstructionMethod.parse(self.construction))
        self.code_config_ = res.code_config(s, self.t_slots)
        self.reliabilities_ = res.reliabilities
        self.order_ = res.order
        self.n_streams_ = s
        self.k_info_ = k
        return self

    def transform(self, X):
        """Encode rows of ``K`` information bits into rows of ``N`` code bits."""
        check_is_fitted(self)
        cfg: CodeConfig = self.code_config_
        info = check_bit_rows(X, cfg.k_info)
        u = np.zeros((info.shape[0], cfg.n_total), dtype=np.uint8)
        u[:, cfg.info_set] = info
        x = encode_2d(u.reshape(-1, cfg.s_streams, cfg.t_slots))
        return x.reshape(info.shape[0], cfg.n_total)

    def predict(self, X):
        """SC-decode rows of ``N`` channel LLRs into rows of ``K`` information bits."""
        check_is_fitted(self)
        cfg: CodeConfig = self.code_config_
        llr = check_llr_rows(X, cfg.n_total)
        u_hat = sc_decode_batch(llr, cfg.frozen_mask, self.min_sum)
        return u_hat[:, cfg.info_set]
