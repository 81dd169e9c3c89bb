"""
Following one marked ball
=========================

Balls are identical, so the site of one tagged ball at the final time is
distributed like the occupation profile. Its histogram over many trials
reproduces the walk, and its path gives first-passage times.
"""

import numpy as np

from boxwalk import CoinParams, QubitSpec, RunConfig, run_lattice
from boxwalk.analysis import aggregate_trials, first_passage_time, oracle_distribution, total_variation

cfg = RunConfig(CoinParams.hadamard(), QubitSpec.symmetric(), total=10**6, steps=100, seed=0, trials=2000)

# One trajectory of the marked ball.
_, path = run_lattice(cfg)
print(path[:20])

###############################################################################
# Endpoint histogram versus the exact distribution. The residual distance
# is dominated by the finite number of trials.
agg = aggregate_trials(cfg, fpt_target=20)
print("TV", total_variation(agg.endpoint_frequencies(), oracle_distribution(cfg)))

###############################################################################
# First hit of site 20 along each trajectory; runs that never reach it are
# reported as None.
hits = [t for t in agg.first_passage if t is not None]
print(len(hits), "of", cfg.trials, "reached x=20; mean time", np.mean(hits))
print(first_passage_time(path, 20))
