import math

import numpy as np
import pytest

from boxwalk import activespin as asp
from boxwalk import boxball as bb
from boxwalk.errors import ParameterError
from boxwalk.export import read_csv, write_spin_snapshot
from boxwalk.quantum_reference import CoinParams, QubitSpec
from boxwalk.streams import trial_rng

from conftest import angle_diff, random_coin

H = CoinParams.hadamard()
THETA0 = CoinParams(0.4, 0.0, -1.1)
UP = QubitSpec(1.0, 0.0, 0.0, 0.0)
CORR = asp.SpinParams(0.5, 1.0)


def one_site(n_plus, n_minus, eta_plus=0.0, eta_minus=0.0, marked_spin=1):
    return asp.SpinSystemState(
        0, 0, np.array([[n_plus, n_minus]]), np.array([[eta_plus, eta_minus]], dtype=float),
        (0, marked_spin), n_plus + n_minus,
    )


def test_params_validation():
    with pytest.raises(ParameterError):
        asp.SpinParams(-0.1, 0.5)
    with pytest.raises(ParameterError):
        asp.SpinParams(0.3, 1.2)
    with pytest.raises(ParameterError, match="2D"):
        asp.SpinParams(0.7, 0.5)


def test_tilde_n_plus_examples():
    assert asp.tilde_n_plus(500, 500, 0.2, 0.2, H) == pytest.approx(1000)
    assert asp.tilde_n_plus(123, 877, 1.0, -1.0, THETA0) == 123
    assert asp.tilde_n_plus(360, 640, 0, 0, H) == pytest.approx(980)


def test_tilde_n_plus_matches_boxball():
    rng = np.random.default_rng(5)
    for _ in range(200):
        p = random_coin(rng)
        n0, n1 = (int(v) for v in rng.integers(0, 10**6, size=2))
        e0, e1 = rng.uniform(-3, 3, size=2)
        assert asp.tilde_n_plus(n0, n1, e0, e1, p) == bb.tilde_n0(bb.TwoBoxState(n0, n1, e0, e1, 0 if n0 else 1), p)


def test_flip_rate_examples():
    assert asp.flip_rate(600, 400, 600, 1) == 0 and asp.flip_rate(600, 400, 600, -1) == 0
    assert asp.flip_rate(1000, 0, 980, 1) == pytest.approx(0.02)
    assert asp.flip_rate(1000, 0, 980, -1) == 0
    assert asp.flip_rate(0, 1000, 500, -1) == pytest.approx(0.5)
    assert asp.flip_rate(0, 1000, 500, 1) == 0


def test_flip_rates_one_sided_and_nonnegative():
    rng = np.random.default_rng(6)
    for _ in range(1000):
        n_plus, n_minus = (int(v) for v in rng.integers(0, 100, size=2))
        target = float(rng.uniform(0, n_plus + n_minus))
        rates = [asp.flip_rate(n_plus, n_minus, target, s) for s in asp.SPINS]
        assert min(rates) >= 0
        assert min(rates) == 0
        expected = sum(r * (n_plus if s == 1 else n_minus) for r, s in zip(rates, asp.SPINS))
        assert expected == pytest.approx(abs(n_plus - target))


def test_flip_step_hadamard_example():
    for seed in range(10):
        out = asp.spin_flip_step(one_site(500, 500), H, trial_rng(seed))
        assert out.counts.tolist() == [[1000, 0]]
        assert out.marked == (0, 1)


def test_flip_step_diagonal_coin():
    out = asp.spin_flip_step(one_site(300, 700, 0.1, -0.2, -1), THETA0, trial_rng(0))
    assert out.counts.tolist() == [[300, 700]]
    assert angle_diff(out.phases[0, 0], 0.1 + 0.4) < 1e-12
    assert angle_diff(out.phases[0, 1], -0.2 - 0.4) < 1e-12


def test_flip_count_is_rounded_imbalance():
    rng = np.random.default_rng(7)
    for k in range(300):
        p = random_coin(rng)
        n_plus, n_minus = (int(v) for v in rng.integers(1, 3000, size=2))
        e = rng.uniform(-3, 3, size=2)
        s = one_site(n_plus, n_minus, *e)
        out = asp.spin_flip_step(s, p, trial_rng(k))
        delta = n_plus - float(asp.tilde_n_plus(n_plus, n_minus, *e, p))
        flips = abs(int(out.counts[0, 0]) - n_plus)
        assert math.floor(abs(delta)) - 1e-9 <= flips <= math.ceil(abs(delta)) + 1e-9 or abs(flips - abs(delta)) < 1e-6
        assert int(out.counts.sum()) == s.total


def test_hop_completely_biased():
    s = asp.SpinSystemState(0, -1, np.array([[0, 0], [40, 60], [0, 0]]), np.array([[0, 0], [0.5, -0.5], [0, 0]], dtype=float), (0, -1), 100)
    out = asp.hop_step(s, CORR, trial_rng(0))
    d = dict(zip(out.sites.tolist(), out.counts.tolist()))
    assert d[1] == [40, 0] and d[-1] == [0, 60] and d[0] == [0, 0]
    assert out.phases[out.sites.tolist().index(1), 0] == 0.5
    assert out.phases[out.sites.tolist().index(-1), 1] == -0.5
    assert out.marked == (-1, -1)


def test_hop_zero_rate_is_identity():
    s = one_site(321, 679, 0.3, 0.1)
    out = asp.hop_step(s, asp.SpinParams(0.0, 0.3), trial_rng(0))
    assert dict(zip(out.sites.tolist(), out.counts.tolist()))[0] == [321, 679]
    assert int(out.counts.sum()) == 1000


def test_hop_unbiased_binomial():
    rights = []
    for k in range(10_000):
        out = asp.hop_step(one_site(10_000, 0), asp.SpinParams(0.5, 0.0), trial_rng(9, k))
        rights.append(int(out.counts[-1, 0]))
        assert int(out.counts[1, 0]) == 0
    rights = np.array(rights)
    assert rights.mean() == pytest.approx(5000, abs=2)
    assert rights.std() == pytest.approx(50, rel=0.05)
    assert np.mean(np.abs(rights - 5000) <= 150) > 0.99


def test_hop_rejects_oversized_rate():
    p = object.__new__(asp.SpinParams)
    object.__setattr__(p, "D", 0.6)
    object.__setattr__(p, "epsilon", 0.0)
    with pytest.raises(ParameterError):
        asp.hop_step(one_site(10, 0), p, trial_rng(0))


def test_run_active_examples():
    s = asp.run_active(bb.RunConfig(H, UP, 10**6, 2, seed=1), CORR)
    d = asp.density_profile(s)
    for x, p in {2: 0.25, 0: 0.5, -2: 0.25}.items():
        assert abs(d[x] - p) < 3e-6
    s = asp.run_active(bb.RunConfig(THETA0, UP, 1000, 7, seed=1), CORR)
    assert asp.density_profile(s).trimmed().as_dict() == {7: 1.0}
    assert s.counts[s.sites.tolist().index(7)].tolist() == [1000, 0]
    s = asp.run_active(bb.RunConfig(H, QubitSpec.symmetric(), 1000, 0, seed=1), CORR)
    assert s.counts.tolist() == [[500, 500]]
    assert asp.density_profile(s).as_dict() == {0: 1.0}


@pytest.mark.parametrize("seed", range(5))
def test_equals_boxball_at_correspondence_point(seed):
    cfg = bb.RunConfig(H, QubitSpec.symmetric(), 10**5, 30, seed=seed)
    box, traj = bb.run_lattice(cfg, trial_rng(seed))
    spins = list(asp.iter_active(cfg, CORR, trial_rng(seed)))
    final = spins[-1]
    assert np.array_equal(final.counts[::2], box.occ)
    assert not final.counts[1::2].any()
    assert np.array_equal(final.phases[::2], box.phase)
    assert [s.marked[0] for s in spins] == traj
    assert asp.density_profile(final).as_dict() == bb.occupation_distribution(box).as_dict()


def test_conservation_off_correspondence():
    cfg = bb.RunConfig(H, QubitSpec.symmetric(), 20_000, 40, seed=4)
    for s in asp.iter_active(cfg, asp.SpinParams(0.3, 0.4), trial_rng(4)):
        assert int(s.counts.sum()) == 20_000
        assert np.all(s.counts >= 0)
        x, sp = s.marked
        assert s.counts[x - s.x_min, s.lane(sp)] >= 1


def test_density_profile_sums_to_one():
    s = asp.run_active(bb.RunConfig(H, QubitSpec.symmetric(), 99_991, 25, seed=3), asp.SpinParams(0.25, 0.8))
    assert asp.density_profile(s).total() == pytest.approx(1, abs=1e-12)


def test_snapshot_rows(tmp_path):
    s = asp.run_active(bb.RunConfig(H, QubitSpec.symmetric(), 1000, 4, seed=2), CORR)
    rows = read_csv(write_spin_snapshot(tmp_path / "s.csv", asp.snapshot_rows(s)))
    assert sum(int(r["n_xs"]) for r in rows) == 1000
    assert {r["s"] for r in rows} <= {"1", "-1"}
    assert all(r["t"] == "4" for r in rows)
