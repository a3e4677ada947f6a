"""Monte Carlo sweeps: stopping rule, worker pool, merging and CSV output."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binomtest

from ..exceptions import ConfigError
from .config import SimConfig
from .engine import run_block

__all__ = [
    "BLOCK_SIZE",
    "SWEEP_COLUMNS",
    "PointCounts",
    "SimResult",
    "wilson_interval",
    "run_point",
    "run_sweep",
    "merge_results",
]

# Trials are scheduled in blocks of this size.  The block size is part of
# the scheduling only; the stopping rule is evaluated per trial, so results
# do not depend on it either.
BLOCK_SIZE = 512
SWEEP_COLUMNS = (
    "esn0_db",
    "frames",
    "bit_errors",
    "frame_errors",
    "ber",
    "fer",
    "fer_ci95_lo",
    "fer_ci95_hi",
)


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for ``k`` successes in ``n`` trials (``(0, 1)`` when ``n == 0``)."""
    if n == 0:
        return 0.0, 1.0
    ci = binomtest(int(k), int(n)).proportion_ci(confidence, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass(frozen=True)
class PointCounts:
    """Error counts at one Es/N0 point.  ``+`` is the merge operation."""

    esn0_db: float
    frames: int = 0
    bit_errors: int = 0
    frame_errors: int = 0

    def __post_init__(self):
        if min(self.frames, self.bit_errors, self.frame_errors) < 0:
            raise ValueError("counts must be non-negative")
        if self.frame_errors > self.frames:
            raise ValueError("more frame errors than frames")

    def __add__(self, other: "PointCounts") -> "PointCounts":
        if not isinstance(other, PointCounts):
            return NotImplemented
        if other.esn0_db != self.esn0_db:
            raise ValueError(f"cannot merge {self.esn0_db} dB with {other.esn0_db} dB")
        return PointCounts(
            self.esn0_db,
            self.frames + other.frames,
            self.bit_errors + other.bit_errors,
            self.frame_errors + other.frame_errors,
        )

    @classmethod
    def from_errors(cls, esn0_db: float, errors) -> "PointCounts":
        errors = np.asarray(errors)
        return cls(float(esn0_db), int(errors.size), int(errors.sum()), int(np.count_nonzero(errors)))

    def ber(self, k_info: int) -> float:
        return self.bit_errors / (self.frames * k_info) if self.frames else float("nan")

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else float("nan")

    def fer_ci(self) -> tuple[float, float]:
        return wilson_interval(self.frame_errors, self.frames)


@dataclass
class SimResult:
    config: SimConfig
    points: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def config_hash(self) -> str:
        return self.config.config_hash()

    def point(self, esn0_db: float) -> PointCounts:
        for p in self.points:
            if p.esn0_db == float(esn0_db):
                return p
        raise KeyError(esn0_db)

    def rows(self) -> list[dict]:
        k = self.config.k_info
        out = []
        for p in self.points:
            lo, hi = p.fer_ci()
            out.append(
                dict(
                    esn0_db=p.esn0_db,
                    frames=p.frames,
                    bit_errors=p.bit_errors,
                    frame_errors=p.frame_errors,
                    ber=p.ber(k),
                    fer=p.fer,
                    fer_ci95_lo=lo,
                    fer_ci95_hi=hi,
                )
            )
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in self.rows():
            w.writerow([_fmt(r[c]) for c in SWEEP_COLUMNS])
        return buf.getvalue()

    def metadata(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "seed": self.config.seed,
            "wall_time_s": self.wall_time,
            "config": self.config.to_dict(),
        }

    def write(self, path) -> None:
        """Write the CSV to ``path`` and the metadata to ``path + '.meta.json'``."""
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())
        with open(f"{path}.meta.json", "w") as fh:
            json.dump(self.metadata(), fh, indent=2)


def _fmt(v):
    return repr(float(v)) if isinstance(v, float) else str(v)


def merge_results(*results: SimResult) -> SimResult:
    """Sum the counts of partial results produced from the same configuration.

    Raises
    ------
    ConfigError
        If the configuration hashes differ.
    """
    if not results:
        raise ValueError("nothing to merge")
    hashes = {r.config_hash for r in results}
    if len(hashes) != 1:
        raise ConfigError(f"refusing to merge results with different config hashes: {sorted(hashes)}")
    merged: dict[float, PointCounts] = {}
    for r in results:
        for p in r.points:
            merged[p.esn0_db] = merged[p.esn0_db] + p if p.esn0_db in merged else p
    points = [merged[db] for db in sorted(merged)]
    return SimResult(results[0].config, points, sum(r.wall_time for r in results))


def _stop_index(errors: np.ndarray, target: int) -> int | None:
    """Length of the shortest prefix holding ``target`` frame errors, if any."""
    hits = np.flatnonzero(np.cumsum(errors > 0) >= target)
    return int(hits[0]) + 1 if hits.size else None


def run_point(cfg: SimConfig, esn0_db: float, executor=None, first_trial: int = 0) -> PointCounts:
    """Run trials ``first_trial, first_trial + 1, ...`` until the stopping rule fires.

    Stops after the trial that brings the frame-error count to
    ``target_frame_errors`` or after ``max_frames`` trials, whichever comes
    first.  Blocks are dispatched speculatively when an executor is given,
    and any work past the stopping trial is discarded, so the counts are
    identical for every worker count.
    """
    width = cfg.workers if executor is not None else 1
    end = first_trial + cfg.max_frames
    collected = []
    frame_errors = 0
    next_start = first_trial
    while next_start < end:
        spans = []
        for _ in range(width):
            if next_start >= end:
                break
            stop = min(next_start + BLOCK_SIZE, end)
            spans.append((next_start, stop))
            next_start = stop
        if executor is None:
            blocks = [run_block(cfg, esn0_db, a, b) for a, b in spans]
        else:
            futures = [executor.submit(run_block, cfg, esn0_db, a, b) for a, b in spans]
            blocks = [f.result() for f in futures]
        for errors in blocks:
            cut = _stop_index(errors, cfg.target_frame_errors - frame_errors)
            if cut is not None:
                collected.append(errors[:cut])
                return PointCounts.from_errors(esn0_db, np.concatenate(collected))
            collected.append(errors)
            frame_errors += int(np.count_nonzero(errors))
    return PointCounts.from_errors(esn0_db, np.concatenate(collected))


def run_sweep(cfg: SimConfig) -> SimResult:
    """Run every Es/N0 point of ``cfg``; trial indices restart at 0 for each point."""
    t0 = time.perf_counter()
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            points = [run_point(cfg, db, pool) for db in cfg.esn0_db]
    else:
        points = [run_point(cfg, db) for db in cfg.esn0_db]
    return SimResult(cfg, points, time.perf_counter() - t0)
