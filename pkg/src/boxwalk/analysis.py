"""Convergence metrics, trial aggregation and first-passage statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import activespin, boxball
from .boxball import RunConfig
from .distribution import Distribution, as_distribution
from .quantum_reference import evolve, position_distribution
from .streams import trial_rng

DistLike = Distribution | Mapping[int, float]


def _aligned(p: DistLike, q: DistLike) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p, q = as_distribution(p), as_distribution(q)
    sites = np.union1d(p.sites, q.sites)
    a = np.zeros(sites.size)
    b = np.zeros(sites.size)
    a[np.searchsorted(sites, p.sites)] = p.mass
    b[np.searchsorted(sites, q.sites)] = q.mass
    return sites, a, b


def total_variation(p: DistLike, q: DistLike) -> float:
    """Half the L1 distance over the union of both supports."""
    _, a, b = _aligned(p, q)
    return float(min(1.0, 0.5 * np.abs(a - b).sum()))


def spreading_moments(p: DistLike) -> tuple[float, float]:
    """Mean and standard deviation of the site index."""
    p = as_distribution(p)
    w = p.mass / p.mass.sum()
    x = p.sites.astype(np.float64)
    mean = float(np.dot(w, x))
    var = float(np.dot(w, (x - mean) ** 2))
    return mean, math.sqrt(max(var, 0.0))


def first_passage_time(trajectory: Sequence[int], target: int) -> int | None:
    """Index of the first visit to ``target``, or None if it is never reached."""
    if len(trajectory) == 0:
        raise ValueError("trajectory must be nonempty")
    hits = np.flatnonzero(np.asarray(trajectory) == target)
    return int(hits[0]) if hits.size else None


def binomial_stderr(p, trials: int) -> np.ndarray:
    p = np.clip(np.asarray(p, dtype=np.float64), 0.0, 1.0)
    return np.sqrt(p * (1 - p) / trials)


def oracle_distribution(cfg: RunConfig) -> Distribution:
    return position_distribution(evolve(cfg.initial, cfg.coin, cfg.steps))


@dataclass
class TrialAggregate:
    """Pooled outcome of independent seeded trials.

    ``endpoint_counts`` histograms the measured site of the marked ball;
    ``mean_occupation`` is the trial-averaged occupation fraction per site.
    """

    trials: int
    endpoint_counts: dict[int, int]
    mean_occupation: Distribution
    trajectories: np.ndarray | None = None
    first_passage: list[int | None] | None = None
    per_trial_tv: list[float] = field(default_factory=list)

    def endpoint_frequencies(self) -> Distribution:
        return Distribution.from_mapping({x: c / self.trials for x, c in self.endpoint_counts.items()})


def _fold(counts_sum: np.ndarray, x_min: int, stride: int, norm: int) -> Distribution:
    return Distribution.from_window(x_min, stride, counts_sum / norm)


def aggregate_trials(
    cfg: RunConfig,
    *,
    spin: activespin.SpinParams | None = None,
    keep_trajectories: bool = False,
    fpt_target: int | None = None,
    oracle: Distribution | None = None,
    batch_size: int = 500,
) -> TrialAggregate:
    """Run ``cfg.trials`` trials; trial ``k`` uses the stream ``(cfg.seed, k)``.

    With ``spin`` set, the active spin engine is used instead of the box-ball
    one. When ``oracle`` is given, each trial's occupation TV distance to it
    is recorded. Results are folded in trial-index order and do not depend
    on ``batch_size``.
    """
    T = cfg.trials
    endpoints = np.empty(T, dtype=np.int64)
    trajs = np.empty((T, cfg.steps + 1), dtype=np.int64) if (keep_trajectories or fpt_target is not None) else None
    occ_sum = None
    x_min = stride = None
    tvs: list[float] = []

    if spin is None:
        for lo in range(0, T, batch_size):
            hi = min(T, lo + batch_size)
            res = boxball.run_lattice_batch(cfg, [trial_rng(cfg.seed, k) for k in range(lo, hi)])
            for j, final in enumerate(res.finals):
                endpoints[lo + j] = boxball.measure_lattice(final)[0]
                dens = final.occ.sum(axis=1)
                occ_sum = dens.copy() if occ_sum is None else occ_sum + dens
                if oracle is not None:
                    tvs.append(total_variation(boxball.occupation_distribution(final), oracle))
            if trajs is not None:
                trajs[lo:hi] = res.trajectories
            x_min, stride = res.finals[0].x_min, 2
    else:
        for k in range(T):
            path = []
            for final in activespin.iter_active(cfg, spin, trial_rng(cfg.seed, k)):
                path.append(final.marked[0])
            endpoints[k] = final.marked[0]
            dens = final.density()
            occ_sum = dens.copy() if occ_sum is None else occ_sum + dens
            if trajs is not None:
                trajs[k] = path
            if oracle is not None:
                tvs.append(total_variation(activespin.density_profile(final), oracle))
            x_min, stride = final.x_min, 1

    sites, counts = np.unique(endpoints, return_counts=True)
    fpts = None
    if fpt_target is not None:
        fpts = [first_passage_time(tr, fpt_target) for tr in trajs]
    return TrialAggregate(
        trials=T,
        endpoint_counts={int(x): int(c) for x, c in zip(sites, counts)},
        mean_occupation=_fold(occ_sum, x_min, stride, cfg.total * T),
        trajectories=trajs if keep_trajectories else None,
        first_passage=fpts,
        per_trial_tv=tvs,
    )


@dataclass(frozen=True)
class SweepRow:
    N: int
    tv_mean: float
    tv_stderr: float


def convergence_sweep(cfg: RunConfig, N_values: Sequence[int]) -> list[SweepRow]:
    """TV distance between box-ball occupations and the exact walk, per ball count.

    Every N reuses the trial streams ``(cfg.seed, 0..trials-1)``.
    """
    if len(N_values) == 0:
        raise ValueError("N_values must be nonempty")
    oracle = oracle_distribution(cfg)
    rows = []
    for N in N_values:
        sub = RunConfig(cfg.coin, cfg.initial, int(N), cfg.steps, cfg.seed, cfg.trials)
        tvs = np.array(aggregate_trials(sub, oracle=oracle).per_trial_tv)
        se = float(tvs.std(ddof=1) / math.sqrt(tvs.size)) if tvs.size > 1 else 0.0
        rows.append(SweepRow(int(N), float(tvs.mean()), se))
    return rows
