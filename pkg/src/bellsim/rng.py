"""Deterministic counter-based random streams.

Built on the Philox bit generator, whose output is a pure function of
(key, counter).  The key is the (seed, stream_id) pair and each
simulation trial owns one counter block of four doubles, so trial i's
randomness depends only on (seed, stream_id, i): partitioning trials
across any number of workers reproduces the sequential sequence
exactly, on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

_MASK64 = (1 << 64) - 1

#: Doubles available per counter block (one Philox block is 4 x 64 bits).
BLOCK_DRAWS = 4


def _require_u64(value: int, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValidationError(f"{name} must be an integer, got {type(value).__name__}")
    v = int(value)
    if v < 0 or v > _MASK64:
        raise ValidationError(f"{name} must fit in an unsigned 64-bit integer, got {v}")
    return v


@dataclass(frozen=True, slots=True)
class RngStream:
    """A named, reproducible stream of uniform doubles in [0, 1)."""

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "seed", _require_u64(self.seed, "seed"))
        object.__setattr__(self, "stream_id", _require_u64(self.stream_id, "stream_id"))

    def _bit_generator(self, block: int) -> np.random.Philox:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        bg = np.random.Philox(key=key)
        if block:
            bg.advance(block)
        return bg

    def generator(self, block: int = 0) -> np.random.Generator:
        """Sequential generator starting at the given counter block."""
        return np.random.Generator(self._bit_generator(_require_u64(block, "block")))

    def trial_generator(self, index: int) -> np.random.Generator:
        """Generator for one trial's private counter block (up to 4 doubles).

        Drawing more than :data:`BLOCK_DRAWS` doubles from it runs into
        the next trial's block; per-trial simulation code must stay
        within the block budget.
        """
        return self.generator(index)

    def trial_doubles(self, n_trials: int, per_trial: int, start: int = 0) -> np.ndarray:
        """Uniform doubles for a contiguous run of trials, shape (n_trials, per_trial).

        Row i is the start of counter block ``start + i``, so chunked
        generation with matching offsets concatenates to the sequential
        stream regardless of chunk boundaries.
        """
        if not 1 <= per_trial <= BLOCK_DRAWS:
            raise ValidationError(f"per_trial must be in 1..{BLOCK_DRAWS}, got {per_trial}")
        if n_trials < 0:
            raise ValidationError(f"n_trials must be >= 0, got {n_trials}")
        raw = self.generator(start).random(n_trials * BLOCK_DRAWS)
        return raw.reshape(n_trials, BLOCK_DRAWS)[:, :per_trial]


def chunk_bounds(total: int, workers: int) -> list[tuple[int, int]]:
    """Contiguous [lo, hi) trial ranges, one per worker (some may be empty)."""
    if workers < 1:
        raise ValidationError(f"workers must be >= 1, got {workers}")
    if total < 0:
        raise ValidationError(f"total must be >= 0, got {total}")
    edges = [round(total * w / workers) for w in range(workers + 1)]
    return [(lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]
