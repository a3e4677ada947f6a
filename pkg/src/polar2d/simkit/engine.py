"""Batched link-level trial pipeline.

Trial ``i`` consumes one counter-based generator.  Its normal draws are laid
out in a fixed order (channel, transmitter-side pilot noise, receiver-side
pilot noise, data noise) followed by the information bits, so runs that
differ only in Es/N0, construction or CSI mode see the same channel and
noise realisations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..mimo import CsiMode, eigenvalues, lmmse_estimate, parallel_transmit, transmit_pilots
from ..modem import get_constellation, llr_demap, map_bits
from ..polar_core import encode_2d
from ..reliability import evolve, frozen_masks, per_stream_snr
from ..scdec import sc_decode_batch
from .config import SimConfig
from .rng import STREAM_TRIAL, trial_generator

__all__ = ["TrialDraws", "draw_trials", "db_to_linear", "link_block", "run_block", "run_trial"]

_INV_SQRT2 = np.sqrt(0.5)


def db_to_linear(db) -> float:
    return float(10.0 ** (float(db) / 10.0))


@dataclass
class TrialDraws:
    """Unit-variance randomness for a contiguous block of trials."""

    h: np.ndarray  # (B, L, S), CN(0, 1)
    pilot_noise_tx: np.ndarray  # (B, L, Lp)
    pilot_noise_rx: np.ndarray  # (B, L, Lp)
    noise: np.ndarray  # (B, S, T); symbol j of a stream uses column j
    info: np.ndarray  # (B, K) uint8

    def __len__(self) -> int:
        return self.h.shape[0]


def draw_trials(cfg: SimConfig, start: int, stop: int, stream: int = STREAM_TRIAL) -> TrialDraws:
    """Draw randomness for trials ``start .. stop-1``; each is a function of ``(seed, i)`` only."""
    L, S, T, Lp = cfg.l_rx, cfg.s_streams, cfg.t_slots, cfg.pilot_len
    sizes = np.array([L * S, L * Lp, L * Lp, S * T])
    cuts = np.cumsum(sizes)[:-1]
    B = stop - start
    z = np.empty((B, 2 * sizes.sum()))
    info = np.empty((B, cfg.k_info), dtype=np.uint8)
    for b, i in enumerate(range(start, stop)):
        rng = trial_generator(cfg.seed, i, stream)
        z[b] = rng.standard_normal(z.shape[1])
        info[b] = rng.integers(0, 2, cfg.k_info, dtype=np.uint8)
    c = _INV_SQRT2 * (z[:, 0::2] + 1j * z[:, 1::2])
    h, ptx, prx, nz = np.split(c, cuts, axis=1)
    return TrialDraws(
        h=h.reshape(B, L, S),
        pilot_noise_tx=ptx.reshape(B, L, Lp),
        pilot_noise_rx=prx.reshape(B, L, Lp),
        noise=nz.reshape(B, S, T),
        info=info,
    )


def _estimated_eigenvalues(h, noise, pilot_len, pilot_esn0):
    y_p, x_p = transmit_pilots(h, pilot_len, pilot_esn0, noise, 1.0)
    return eigenvalues(lmmse_estimate(y_p, x_p, 1.0))


def _masks(cfg: SimConfig, lambdas, esn0, method):
    rel = evolve(per_stream_snr(lambdas, esn0), cfg.t_slots, method)
    return frozen_masks(rel, cfg.k_info)


def link_block(cfg, esn0, draws, lam_true, lam_tx, lam_rx, method=None):
    """Encode with the frozen set implied by ``lam_tx``, decode with ``lam_rx``.

    The signal always travels through the true eigenmodes ``lam_true``; the
    demapper's gains and the decoder's frozen set come from ``lam_rx``.
    Returns per-trial information-bit error counts and the two masks.
    """
    method = cfg.construction if method is None else method
    const = get_constellation(cfg.modulation)
    B, S, T, K = len(draws), cfg.s_streams, cfg.t_slots, cfg.k_info
    f_rx = _masks(cfg, lam_rx, esn0, method)
    f_tx = f_rx if lam_tx is lam_rx else _masks(cfg, lam_tx, esn0, method)

    u = np.zeros((B, S * T), dtype=np.uint8)
    u[~f_tx] = draws.info.ravel()
    x = encode_2d(u.reshape(B, S, T))
    sym = map_bits(x, const)
    t_sym = sym.shape[-1]
    y = parallel_transmit(sym, lam_true, None, n0=1.0, es=esn0, noise=draws.noise[..., :t_sym])
    llr = llr_demap(y, np.sqrt(lam_rx)[..., None], esn0, 1.0, const).reshape(B, S * T)
    u_hat = sc_decode_batch(llr, f_rx)
    info_hat = u_hat[~f_rx].reshape(B, K)
    return np.count_nonzero(info_hat != draws.info, axis=1), f_tx, f_rx


def run_block(cfg: SimConfig, esn0_db: float, start: int, stop: int) -> np.ndarray:
    """Information-bit error counts for trials ``start .. stop-1`` at one Es/N0 point."""
    esn0 = db_to_linear(esn0_db)
    draws = draw_trials(cfg, start, stop)
    lam = eigenvalues(draws.h)
    if CsiMode(cfg.csi) is CsiMode.ESTIMATED:
        pilot = esn0 if cfg.pilot_esn0_db is None else db_to_linear(cfg.pilot_esn0_db)
        lam_hat = _estimated_eigenvalues(draws.h, draws.pilot_noise_rx, cfg.pilot_len, pilot)
    else:
        lam_hat = lam
    errors, _, _ = link_block(cfg, esn0, draws, lam, lam_hat, lam_hat)
    return errors


def run_trial(cfg: SimConfig, esn0_db: float, trial_index: int) -> tuple[int, bool]:
    """One full pipeline pass: ``(bit_errors, frame_error)`` for trial ``trial_index``."""
    e = int(run_block(cfg, esn0_db, trial_index, trial_index + 1)[0])
    return e, e > 0
