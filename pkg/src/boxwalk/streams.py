"""Per-trial random streams derived from a master seed.

Trial ``k`` of a run seeded with ``seed`` always gets the same generator,
independent of how many other trials exist or in which order they run.
"""

from __future__ import annotations

import numpy as np


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(int(trial),))
    return np.random.Generator(np.random.PCG64(ss))
