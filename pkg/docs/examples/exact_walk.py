"""
The exact walk
==============

The amplitude oracle evolves a coined walk on a line and gives the
position distribution that the classical engines try to reproduce.
"""

# A walker starting at the origin with coin state (|0> - i|1>)/sqrt(2)
# spreads symmetrically under the Hadamard coin.
import numpy as np

from boxwalk import CoinParams, QubitSpec, evolve, position_distribution
from boxwalk.analysis import spreading_moments

H = CoinParams.hadamard()
start = QubitSpec.symmetric()
print(np.round(H.matrix(), 4))

###############################################################################
# Only sites of the right parity are stored, so the field at time t has
# t + 1 rows.
field = evolve(start, H, 100)
print(field.sites[:3], field.sites[-3:], field.norm())

###############################################################################
# The distribution has two peaks near +-t/sqrt(2) and a flat middle.
p = position_distribution(field)
peak = p.sites[np.argmax(p.mass)]
print("peak at", peak, "mass", p.mass.max())

###############################################################################
# Spreading is ballistic: the standard deviation grows linearly in t,
# unlike the sqrt(t) of a classical random walk.
for t in (25, 50, 100, 200):
    _, sd = spreading_moments(position_distribution(evolve(start, H, t)))
    print(t, round(sd, 2), round(sd / t, 4))

###############################################################################
# A coin with theta = 0 never mixes the two lanes, so the walker moves
# ballistically in one direction.
straight = CoinParams(0.3, 0.0, -0.8)
print(position_distribution(evolve(QubitSpec(1, 0, 0, 0), straight, 10)).trimmed().as_dict())
