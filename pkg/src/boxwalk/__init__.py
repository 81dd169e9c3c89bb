"""Classical interacting-particle emulation of discrete-time quantum walks.

Three engines share one vocabulary:

* :mod:`boxwalk.quantum_reference` - the exact complex-amplitude walk,
* :mod:`boxwalk.boxball` - boxes of balls with real phase tags,
* :mod:`boxwalk.activespin` - spin-carrying particles with biased hopping,

and :mod:`boxwalk.analysis` compares them.
"""

from .activespin import SpinParams, SpinSystemState, density_profile, run_active
from .analysis import (
    TrialAggregate,
    aggregate_trials,
    convergence_sweep,
    first_passage_time,
    spreading_moments,
    total_variation,
)
from .boxball import (
    BoxLatticeState,
    RunConfig,
    init_lattice,
    lattice_step,
    measure_lattice,
    occupation_distribution,
    run_lattice,
    run_lattice_batch,
)
from .distribution import Distribution
from .errors import ConservationError, ParameterError
from .quantum_reference import (
    AmplitudeField,
    CoinParams,
    CoinSchedule,
    QubitSpec,
    evolve,
    position_distribution,
)
from .streams import trial_rng

__version__ = "0.1.0"
