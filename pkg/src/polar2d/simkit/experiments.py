"""Eigen-spectrum and two-sided CSI alignment experiments."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..exceptions import ConfigError
from ..mimo import CsiMode, eigenvalues
from .config import SimConfig
from .engine import _estimated_eigenvalues, db_to_linear, draw_trials, link_block
from .rng import STREAM_SPECTRUM, trial_generator
from .sweep import BLOCK_SIZE

__all__ = [
    "SPECTRUM_COLUMNS",
    "CSI_COLUMNS",
    "SpectrumResult",
    "spectrum_experiment",
    "CsiAlignmentPoint",
    "csi_alignment_experiment",
    "csi_alignment_csv",
]

SPECTRUM_COLUMNS = ("config", "realization", "k", "lambda_k")
CSI_COLUMNS = (
    "pilot_esn0_db",
    "esn0_db",
    "trials",
    "mismatch_fraction",
    "mismatch_frames",
    "bit_errors_mismatched",
    "bit_errors_matched",
    "ber_mismatched",
    "ber_matched",
    "fer_mismatched",
    "fer_matched",
)


@dataclass
class SpectrumResult:
    """Sorted eigenvalues per configuration, shape ``(realizations, S)`` each."""

    configs: list
    lambdas: dict

    def means(self) -> dict:
        return {c: v.mean(axis=0) for c, v in self.lambdas.items()}

    def spread(self) -> dict:
        """Mean of ``lambda_1 / lambda_S`` per configuration."""
        return {c: float(np.mean(v[:, 0] / v[:, -1])) for c, v in self.lambdas.items()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SPECTRUM_COLUMNS)
        for c in self.configs:
            label = f"{c[0]}x{c[1]}"
            for r, lam in enumerate(self.lambdas[c]):
                for k, v in enumerate(lam):
                    w.writerow([label, r, k, repr(float(v))])
        return buf.getvalue()


def spectrum_experiment(configs, realizations: int, seed: int = 0) -> SpectrumResult:
    """Draw ``realizations`` channels per ``(S, L)`` pair and record sorted eigenvalues.

    Realization ``r`` of configuration ``(S, L)`` depends only on
    ``(seed, S, L, r)``.
    """
    configs = [(int(s), int(l)) for s, l in configs]
    if realizations < 1:
        raise ConfigError("realizations must be >= 1")
    out = {}
    for s, l in configs:
        if not 1 <= s <= l:
            raise ConfigError(f"need 1 <= S <= L, got S={s}, L={l}")
        key = (int(seed) * 0x9E3779B1 + s * 4099 + l) % 2**64
        h = np.empty((realizations, l, s), dtype=complex)
        for r in range(realizations):
            z = trial_generator(key, r, STREAM_SPECTRUM).standard_normal((l, s, 2))
            h[r] = np.sqrt(0.5) * (z[..., 0] + 1j * z[..., 1])
        out[(s, l)] = eigenvalues(h)
    return SpectrumResult(configs, out)


@dataclass(frozen=True)
class CsiAlignmentPoint:
    pilot_esn0_db: float
    esn0_db: float
    trials: int
    mismatch_bits: int
    mismatch_frames: int
    bit_errors_mismatched: int
    bit_errors_matched: int
    frame_errors_mismatched: int
    frame_errors_matched: int
    n_total: int
    k_info: int

    @property
    def mismatch_fraction(self) -> float:
        """Mean of ``|F_tx ^ F_rx| / N`` over trials."""
        return self.mismatch_bits / (self.trials * self.n_total)

    @property
    def ber_mismatched(self) -> float:
        return self.bit_errors_mismatched / (self.trials * self.k_info)

    @property
    def ber_matched(self) -> float:
        return self.bit_errors_matched / (self.trials * self.k_info)

    def row(self) -> dict:
        return dict(
            pilot_esn0_db=self.pilot_esn0_db,
            esn0_db=self.esn0_db,
            trials=self.trials,
            mismatch_fraction=self.mismatch_fraction,
            mismatch_frames=self.mismatch_frames,
            bit_errors_mismatched=self.bit_errors_mismatched,
            bit_errors_matched=self.bit_errors_matched,
            ber_mismatched=self.ber_mismatched,
            ber_matched=self.ber_matched,
            fer_mismatched=self.frame_errors_mismatched / self.trials,
            fer_matched=self.frame_errors_matched / self.trials,
        )


def _alignment_block(cfg, esn0_db, pilot_db, start, stop):
    esn0, pilot = db_to_linear(esn0_db), db_to_linear(pilot_db)
    d = draw_trials(cfg, start, stop)
    lam = eigenvalues(d.h)
    lam_tx = _estimated_eigenvalues(d.h, d.pilot_noise_tx, cfg.pilot_len, pilot)
    lam_rx = _estimated_eigenvalues(d.h, d.pilot_noise_rx, cfg.pilot_len, pilot)
    e_mis, f_tx, f_rx = link_block(cfg, esn0, d, lam, lam_tx, lam_rx)
    e_mat, _, _ = link_block(cfg, esn0, d, lam, lam_rx, lam_rx)
    diff = np.count_nonzero(f_tx != f_rx, axis=1)
    return np.array(
        [
            diff.sum(),
            np.count_nonzero(diff),
            e_mis.sum(),
            e_mat.sum(),
            np.count_nonzero(e_mis),
            np.count_nonzero(e_mat),
        ],
        dtype=np.int64,
    )


def csi_alignment_experiment(cfg: SimConfig, trials: int, pilot_esn0_db=None) -> list[CsiAlignmentPoint]:
    """Frozen-set agreement between independently estimating transmitter and receiver.

    For every Es/N0 point of ``cfg`` and every pilot SNR, trials
    ``0 .. trials-1`` each draw a true channel and two independent pilot
    noise blocks.  The transmitter builds its frozen set from its own
    estimate and encodes with it; the receiver demaps with its own estimate
    and decodes assuming its own frozen set.  The matched reference lets both
    ends use the receiver's set.

    ``pilot_esn0_db=None`` ties the pilot SNR to each data point (or to
    ``cfg.pilot_esn0_db`` when that is set).

    Raises
    ------
    ConfigError
        If ``cfg.csi`` is ``"perfect"`` or ``trials < 1``.
    """
    if CsiMode(cfg.csi) is not CsiMode.ESTIMATED:
        raise ConfigError("CSI alignment needs csi='estimated'")
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if pilot_esn0_db is not None and np.ndim(pilot_esn0_db) == 0:
        pilot_esn0_db = [pilot_esn0_db]
    grid = []
    for db in cfg.esn0_db:
        if pilot_esn0_db is not None:
            grid += [(float(p), db) for p in pilot_esn0_db]
        else:
            grid.append((db if cfg.pilot_esn0_db is None else float(cfg.pilot_esn0_db), db))
    spans = [(a, min(a + BLOCK_SIZE, trials)) for a in range(0, trials, BLOCK_SIZE)]
    results = []
    pool = ProcessPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        for p_db, db in grid:
            if pool is None:
                parts = [_alignment_block(cfg, db, p_db, a, b) for a, b in spans]
            else:
                parts = [pool.submit(_alignment_block, cfg, db, p_db, a, b) for a, b in spans]
                parts = [f.result() for f in parts]
            tot = np.sum(parts, axis=0)
            results.append(
                CsiAlignmentPoint(p_db, db, trials, *(int(v) for v in tot), cfg.n_total, cfg.k_info)
            )
    finally:
        if pool is not None:
            pool.shutdown()
    return results


def csi_alignment_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSI_COLUMNS)
    for p in points:
        r = p.row()
        w.writerow([repr(v) if isinstance(v, float) else v for v in (r[c] for c in CSI_COLUMNS)])
    return buf.getvalue()
