"""Reproducible random number streams.

Every stochastic routine in this package takes an explicit stream so that
experiments are a pure function of (master_seed, stream layout).  Streams with
distinct keys are statistically independent (numpy SeedSequence spawning), and
the same (master_seed, key) always reproduces the same draws.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """A keyed, reproducible random stream.

    The key is a tuple of small integers (e.g. (cell, hypothesis, trial)),
    mapped to a SeedSequence spawn key.  Identical (master_seed, key) give
    identical sequences; different keys give independent streams.
    """

    master_seed: int
    key: tuple[int, ...] = field(default=())

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.master_seed, spawn_key=self.key)
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, *key: int) -> "RngStream":
        return RngStream(self.master_seed, self.key + tuple(int(k) for k in key))
