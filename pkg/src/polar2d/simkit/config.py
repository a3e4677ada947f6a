"""Experiment configuration: validation, JSON I/O and hashing."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field

from ..exceptions import ConfigError
from ..mimo import CsiMode
from ..modem import get_constellation
from ..polar_core import is_power_of_two
from ..reliability import ConstructionMethod

__all__ = ["SimConfig", "JSON_KEYS", "load_config", "WORKERS_ENV"]

JSON_KEYS = (
    "s_streams",
    "l_rx",
    "t_slots",
    "rate",
    "modulation",
    "construction",
    "csi",
    "pilot_len",
    "esn0_db",
    "max_frames",
    "target_frame_errors",
    "seed",
    "workers",
)
WORKERS_ENV = "P2D_WORKERS"


@dataclass(frozen=True)
class SimConfig:
    """One link-level experiment.

    ``esn0_db`` is the per-stream symbol energy over ``N0`` in dB, so stream
    ``k`` sees SNR ``lambda_k * Es/N0``.  Pilot energy follows the data
    energy unless ``pilot_esn0_db`` pins it.
    """

    s_streams: int = 4
    l_rx: int = 8
    t_slots: int = 32
    rate: float = 0.5
    modulation: str = "bpsk"
    construction: str = "rca"
    csi: str = "perfect"
    pilot_len: int | None = None
    esn0_db: tuple = (0.0,)
    max_frames: int = 100_000
    target_frame_errors: int = 100
    seed: int = 0
    workers: int = 1
    pilot_esn0_db: float | None = field(default=None, compare=True)

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        for name in ("s_streams", "l_rx", "t_slots", "max_frames", "target_frame_errors", "workers"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f"{name} must be an integer, got {v!r}")
        if not is_power_of_two(self.s_streams) or not is_power_of_two(self.t_slots):
            raise ConfigError("s_streams and t_slots must be powers of two")
        if self.s_streams > self.l_rx:
            raise ConfigError(f"need S <= L, got S={self.s_streams}, L={self.l_rx}")
        if not 0.0 < float(self.rate) <= 1.0:
            raise ConfigError(f"rate must lie in (0, 1], got {self.rate}")
        set_("rate", float(self.rate))
        if self.k_info < 1:
            raise ConfigError("rate too small: K = round(rate * N) must be at least 1")
        try:
            const = get_constellation(self.modulation)
            set_("construction", ConstructionMethod.parse(self.construction).value)
            set_("csi", CsiMode(str(self.csi).lower()).value)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        set_("modulation", const.name)
        if self.t_slots % const.bits_per_symbol:
            raise ConfigError(f"{const.name} needs t_slots divisible by {const.bits_per_symbol}")
        if self.pilot_len is None:
            set_("pilot_len", 2 * self.s_streams)
        if isinstance(self.pilot_len, bool) or not isinstance(self.pilot_len, int):
            raise ConfigError("pilot_len must be an integer")
        if self.pilot_len < self.s_streams:
            raise ConfigError(f"pilot_len must be >= S={self.s_streams}")
        grid = self.esn0_db
        if isinstance(grid, (int, float)):
            grid = (grid,)
        grid = tuple(float(x) for x in grid)
        if not grid:
            raise ConfigError("esn0_db must not be empty")
        set_("esn0_db", grid)
        if self.max_frames < 1 or self.target_frame_errors < 1 or self.workers < 1:
            raise ConfigError("max_frames, target_frame_errors and workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    @property
    def n_total(self) -> int:
        return self.s_streams * self.t_slots

    @property
    def k_info(self) -> int:
        return int(round(self.rate * self.n_total))

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in JSON_KEYS}
        d["esn0_db"] = list(self.esn0_db)
        return d

    def config_hash(self) -> str:
        """SHA-256 over everything that can change results (not ``workers``)."""
        d = self.to_dict()
        d.pop("workers")
        d["pilot_esn0_db"] = self.pilot_esn0_db
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        unknown = set(data) - set(JSON_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def load_config(path, overrides: dict | None = None, environ=None) -> SimConfig:
    """Read a JSON config; ``P2D_WORKERS`` then explicit overrides win."""
    environ = os.environ if environ is None else environ
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    unknown = set(data) - set(JSON_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if environ.get(WORKERS_ENV):
        try:
            data["workers"] = int(environ[WORKERS_ENV])
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer") from None
    for k, v in (overrides or {}).items():
        if v is not None:
            data[k] = v
    return SimConfig(**data)
