import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxwalk import analysis as an
from boxwalk.activespin import SpinParams
from boxwalk.boxball import RunConfig, run_lattice
from boxwalk.distribution import Distribution
from boxwalk.quantum_reference import CoinParams, QubitSpec, evolve, position_distribution

H = CoinParams.hadamard()
SYM = QubitSpec.symmetric()


def test_tv_examples():
    p = {0: 0.25, 2: 0.75}
    assert an.total_variation(p, p) == 0
    assert an.total_variation({0: 1.0}, {4: 0.5, 6: 0.5}) == 1
    assert an.total_variation({0: 1.0}, {0: 0.5, 2: 0.5}) == 0.5


dists = st.dictionaries(st.integers(-20, 20), st.floats(0.01, 1), min_size=1, max_size=10).map(
    lambda d: {k: v / sum(d.values()) for k, v in d.items()}
)


@settings(max_examples=200)
@given(dists, dists, dists)
def test_tv_metric_properties(p, q, r):
    pq = an.total_variation(p, q)
    assert 0 <= pq <= 1
    assert pq == pytest.approx(an.total_variation(q, p), abs=1e-15)
    assert pq <= an.total_variation(p, r) + an.total_variation(r, q) + 1e-12


def test_moments_examples():
    assert an.spreading_moments({0: 1.0}) == (0, 0)
    assert an.spreading_moments({1: 0.5, -1: 0.5}) == (0, 1)


def test_oracle_spreads_ballistically():
    mean, sd = an.spreading_moments(position_distribution(evolve(SYM, H, 100)))
    assert abs(mean) < 1e-9
    assert sd == pytest.approx(0.54 * 100, rel=0.10)


def test_first_passage_examples():
    assert an.first_passage_time([0, 1, 2], 2) == 2
    assert an.first_passage_time([0, 1, 2], 0) == 0
    assert an.first_passage_time([0, 1, 2], 7) is None
    with pytest.raises(ValueError):
        an.first_passage_time([], 0)
    _, traj = run_lattice(RunConfig(CoinParams(0, 0, 0), QubitSpec(1, 0, 0, 0), 100, 8))
    assert an.first_passage_time(traj, 5) == 5


def test_binomial_stderr():
    assert an.binomial_stderr(0.5, 100) == pytest.approx(0.05)
    assert an.binomial_stderr(0.0, 100) == 0


def test_single_trial_aggregate():
    agg = an.aggregate_trials(RunConfig(H, SYM, 10_000, 20, seed=3, trials=1))
    assert sum(agg.endpoint_counts.values()) == 1
    assert list(agg.endpoint_counts.values()) == [1]
    assert agg.mean_occupation.total() == pytest.approx(1)


def test_aggregate_is_independent_of_batching():
    cfg = RunConfig(H, SYM, 5000, 30, seed=11, trials=37)
    a = an.aggregate_trials(cfg, batch_size=5, keep_trajectories=True, fpt_target=4)
    b = an.aggregate_trials(cfg, batch_size=500, keep_trajectories=True, fpt_target=4)
    assert a.endpoint_counts == b.endpoint_counts
    assert np.array_equal(a.mean_occupation.mass, b.mean_occupation.mass)
    assert np.array_equal(a.trajectories, b.trajectories)
    assert a.first_passage == b.first_passage
    assert sum(a.endpoint_counts.values()) == 37


def test_aggregate_trials_are_reproducible_subruns():
    cfg = RunConfig(H, SYM, 5000, 30, seed=11, trials=10)
    agg = an.aggregate_trials(cfg, keep_trajectories=True)
    from boxwalk.streams import trial_rng

    for k in (0, 4, 9):
        _, traj = run_lattice(cfg, trial_rng(11, k))
        assert agg.trajectories[k].tolist() == traj


def test_spin_aggregate_matches_boxball_at_correspondence():
    cfg = RunConfig(H, SYM, 5000, 20, seed=2, trials=6)
    a = an.aggregate_trials(cfg, keep_trajectories=True)
    b = an.aggregate_trials(cfg, spin=SpinParams(0.5, 1.0), keep_trajectories=True)
    assert a.endpoint_counts == b.endpoint_counts
    assert np.array_equal(a.trajectories, b.trajectories)
    assert a.mean_occupation.as_dict() == b.mean_occupation.as_dict()


def test_per_trial_tv_recorded():
    cfg = RunConfig(H, SYM, 10**4, 30, seed=0, trials=4)
    oracle = an.oracle_distribution(cfg)
    agg = an.aggregate_trials(cfg, oracle=oracle)
    assert len(agg.per_trial_tv) == 4
    assert all(0 <= v < 0.2 for v in agg.per_trial_tv)


def test_sweep_is_deterministic_and_decreasing():
    cfg = RunConfig(H, SYM, 1, 40, seed=5, trials=5)
    rows = an.convergence_sweep(cfg, [100, 100, 10**4, 10**6])
    assert rows[0] == rows[1]
    assert rows[1].tv_mean > rows[2].tv_mean > rows[3].tv_mean
    assert all(r.tv_stderr >= 0 for r in rows)
    with pytest.raises(ValueError):
        an.convergence_sweep(cfg, [])


def test_distribution_helpers():
    d = Distribution.from_mapping({3: 0.25, -1: 0.75})
    assert d.sites.tolist() == [-1, 3]
    assert d[0] == 0 and d[3] == 0.25
    assert Distribution.from_window(-2, 2, [0.5, 0.0, 0.5]).trimmed().as_dict() == {-2: 0.5, 2: 0.5}
    assert math.isclose(d.total(), 1.0)
