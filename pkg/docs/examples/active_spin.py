"""
Active spins
============

Particles with an Ising spin hop with a spin-dependent bias and flip
toward the coin target on each site. With D = 0.5 and eps = 1 the hop is
fully biased and the density follows the quantum walk.
"""

from boxwalk import CoinParams, QubitSpec, RunConfig, SpinParams, run_active, run_lattice, trial_rng
from boxwalk.activespin import density_profile, flip_rate
from boxwalk.analysis import oracle_distribution, spreading_moments, total_variation
from boxwalk.boxball import occupation_distribution

cfg = RunConfig(CoinParams.hadamard(), QubitSpec.symmetric(), total=10**6, steps=50, seed=0)

# Only the over-represented spin flips. With n+ = 1000 and a target of 980,
# plus spins flip at rate 0.02 and minus spins do not flip.
print(flip_rate(1000, 0, 980, 1), flip_rate(1000, 0, 980, -1))

###############################################################################
# At the correspondence point the spin model and the box-ball lattice agree
# exactly when they share a random stream.
spins = run_active(cfg, SpinParams(0.5, 1.0), trial_rng(0))
boxes, _ = run_lattice(cfg, trial_rng(0))
print(total_variation(density_profile(spins), occupation_distribution(boxes)))
print(total_variation(density_profile(spins), oracle_distribution(cfg)))

###############################################################################
# Partially biased hopping is outside the correspondence. Weak bias turns
# the ballistic spread into a diffusive one.
for eps in (1.0, 0.8, 0.5, 0.0):
    s = run_active(cfg, SpinParams(0.5, eps), trial_rng(0))
    print(eps, round(spreading_moments(density_profile(s))[1], 2))
