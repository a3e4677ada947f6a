"""Counter-based random substreams: trial ``i`` depends only on ``(seed, i)``."""

from __future__ import annotations

import numpy as np

__all__ = ["trial_generator", "STREAM_TRIAL", "STREAM_SPECTRUM"]

STREAM_TRIAL = 0
STREAM_SPECTRUM = 1


def trial_generator(seed: int, index: int, stream: int = STREAM_TRIAL) -> np.random.Generator:
    """Philox generator keyed by ``seed`` whose counter starts at ``(0, index, stream, 0)``.

    Every draw advances only the lowest counter word, so distinct
    ``(index, stream)`` pairs never overlap within 2**64 draws.
    """
    seed = int(seed) & (2**64 - 1)
    return np.random.Generator(
        np.random.Philox(key=[seed, 0x5851F42D4C957F2D], counter=[0, int(index), int(stream), 0])
    )
