"""
A qubit in two boxes
====================

N identical balls in two boxes encode a qubit: the occupations carry the
moduli and each box carries a phase tag.
"""

import math

from boxwalk import CoinParams, QubitSpec, trial_rng
from boxwalk.quantum_reference import apply_coin_qubit
from boxwalk.boxball import PrepConfig, TwoBoxState, measure_two_box, prepare_two_box, tilde_n0, transform_two_box

# Prepare N = 1000 balls with |r0|^2 = 1/3. The target 333.3 is rounded to
# 333 or 334 with equal probability.
cfg = PrepConfig(total=1000, rho0=1 / 3, phi0=0.0, phi1=0.5)
print([prepare_two_box(cfg, trial_rng(7, k)).n0 for k in range(10)])

###############################################################################
# The coin moves balls between the boxes. For (n0, n1) = (360000, 640000)
# with equal phases the Hadamard coin targets 980000 balls in box 0.
H = CoinParams.hadamard()
s = TwoBoxState(360_000, 640_000, 0.0, 0.0, marked_in=1)
print(tilde_n0(s, H))
print(apply_coin_qubit(QubitSpec(0.6, 0.0, 0.8, 0.0), H).r0 ** 2 * 1_000_000)

###############################################################################
# One transformation step. The marked ball follows a random subset of the
# moved balls, so it lands in box 0 with probability (moved / n1).
out = transform_two_box(s, H, trial_rng(1))
print(out)

###############################################################################
# Measuring the box of the marked ball realises the Born rule: repeated
# preparation and measurement returns box 0 with frequency |r0|^2.
trials = 2000
hits = sum(measure_two_box(prepare_two_box(PrepConfig(10**6, 0.3), trial_rng(3, k)))[0] == 0 for k in range(trials))
print(hits / trials, "+-", round(math.sqrt(0.3 * 0.7 / trials), 3))
