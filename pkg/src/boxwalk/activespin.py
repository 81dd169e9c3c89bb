"""Active spin lattice gas whose density follows the quantum walk.

Every particle carries an Ising spin s = +1/-1 and hops right at rate
D(1 + eps s) and left at rate D(1 - eps s). On each site the spin
populations are rebalanced toward the coin target ``n~+``: only the
over-represented species flips, at per-particle rate ``|delta| / n_s``
with ``delta = n+ - n~+``. Phases belong to (site, spin) populations.

Time is discrete: a flip sub-step followed by a hop sub-step. At
D = 0.5, eps = 1 the hop is deterministic (+ right, - left) and the model
coincides with the box-ball engine under the mapping c=0 <-> s=+1,
c=1 <-> s=-1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from .boxball import (
    BoxLatticeState,
    RunConfig,
    coin_substep,
    init_lattice,
    target_occupation,
    wrap_phase,
)
from .distribution import Distribution
from .errors import ConservationError, ParameterError
from .quantum_reference import CoinLike, as_schedule
from .streams import trial_rng

SPINS = (1, -1)  # lane 0 holds s = +1, lane 1 holds s = -1


@dataclass(frozen=True)
class SpinParams:
    D: float = 0.5
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        if self.D < 0:
            raise ParameterError(f"hop rate D must be nonnegative, got {self.D!r}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ParameterError(f"bias epsilon must lie in [0, 1], got {self.epsilon!r}")
        if 2 * self.D > 1:
            raise ParameterError(f"hop rate D must satisfy 2D <= 1 per unit step, got {self.D!r}")

    def hop_probabilities(self) -> np.ndarray:
        """Rows ``(right, left, stay)`` for lanes s=+1 and s=-1."""
        out = []
        for s in SPINS:
            right = self.D * (1 + self.epsilon * s)
            left = self.D * (1 - self.epsilon * s)
            out.append((right, left, 1 - right - left))
        return np.array(out)


@dataclass
class SpinSystemState:
    """Spin counts and phases on the window ``x_min, x_min + 1, ...``.

    ``counts[i, 0]`` is ``n^{+1}`` and ``counts[i, 1]`` is ``n^{-1}`` at site
    ``x_min + i``. ``marked`` is ``(x, s)``.
    """

    time: int
    x_min: int
    counts: np.ndarray
    phases: np.ndarray
    marked: tuple[int, int]
    total: int

    @property
    def sites(self) -> np.ndarray:
        return self.x_min + np.arange(self.counts.shape[0], dtype=np.int64)

    def lane(self, s: int) -> int:
        return SPINS.index(s)

    def density(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def check(self) -> None:
        if int(self.counts.sum()) != self.total or np.any(self.counts < 0):
            raise ConservationError(
                f"particle count {int(self.counts.sum())} != {self.total} at t={self.time}"
            )
        x, s = self.marked
        if self.counts[x - self.x_min, self.lane(s)] < 1:
            raise ConservationError(f"marked particle sits in empty bucket {self.marked}")

    @classmethod
    def from_boxes(cls, b: BoxLatticeState) -> "SpinSystemState":
        """Map a box-ball configuration onto spins (box 0 -> s=+1, box 1 -> s=-1)."""
        n = b.occ.shape[0]
        width = 2 * n - 1
        counts = np.zeros((width, 2), dtype=np.int64)
        phases = np.zeros((width, 2), dtype=np.float64)
        counts[::2] = b.occ
        phases[::2] = b.phase
        x, c = b.marked
        return cls(b.time, b.x_min, counts, phases, (x, SPINS[c]), b.total)


def tilde_n_plus(n_plus, n_minus, eta_plus, eta_minus, coin) -> np.ndarray:
    """Coin target for the + population, clamped to ``[0, n+ + n-]``."""
    raw = target_occupation(n_plus, n_minus, eta_plus, eta_minus, coin.xi, coin.theta, coin.zeta)
    return np.clip(raw, 0, np.asarray(n_plus) + np.asarray(n_minus))


def flip_rate(n_plus, n_minus, n_tilde_plus, spin: int):
    """Per-particle flip rate of species ``spin`` at one site.

    Only the excess species flips, so the expected number of flips per unit
    time is ``|n+ - n~+|``. A zero imbalance or an empty species gives 0.
    """
    delta = n_plus - n_tilde_plus
    n_s = n_plus if spin == 1 else n_minus
    if delta == 0 or n_s == 0:
        return 0.0
    if (delta > 0) != (spin == 1):
        return 0.0
    return abs(delta) / n_s


def spin_flip_step(
    s: SpinSystemState, coins: CoinLike, rng: np.random.Generator
) -> SpinSystemState:
    """Flip spins on every occupied site and refresh the (site, spin) phases.

    The number of flips at a site is ``|n+ - round(n~+)|`` where ``round`` is
    floor or ceil with probability 1/2 each; this is itself a floor/ceil of
    ``|delta|``. The marked particle flips with probability
    ``flips / n_s`` if it belongs to the flipping species.
    """
    sched = as_schedule(coins)
    x, sp = s.marked
    counts, phases, lanes = coin_substep(
        s.counts[None],
        s.phases[None],
        sched.angles(s.time, s.sites),
        [x - s.x_min],
        [s.lane(sp)],
        [rng],
    )
    out = replace(s, counts=counts[0], phases=phases[0], marked=(x, SPINS[int(lanes[0])]))
    out.check()
    return out


def _incoming_phase(pops: list[np.ndarray], phs: list[np.ndarray]) -> np.ndarray:
    # Collisions only occur off the correspondence point; keep the phase of
    # the largest incoming population, earlier sources winning ties.
    pops_a = np.stack(pops)
    pick = np.argmax(pops_a, axis=0)
    out = np.take_along_axis(np.stack(phs), pick[None], axis=0)[0]
    return np.where(pops_a.sum(axis=0) > 0, out, 0.0)


def hop_step(s: SpinSystemState, p: SpinParams, rng: np.random.Generator) -> SpinSystemState:
    """Move particles one site (or not) according to their spin.

    Per particle: right with probability D(1 + eps s), left with
    D(1 - eps s), stay otherwise. Bucket sizes are drawn binomially; when
    every probability is 0 or 1 no random numbers are used.
    """
    if 2 * p.D > 1:
        raise ParameterError(f"hop rate D must satisfy 2D <= 1 per unit step, got {p.D!r}")
    probs = p.hop_probabilities()
    n = s.counts.shape[0]
    movers = np.zeros((3, n, 2), dtype=np.int64)  # right, left, stay
    deterministic = bool(np.all((probs == 0) | (probs == 1)))
    for lane in (0, 1):
        pr, pl, _ = probs[lane]
        cnt = s.counts[:, lane]
        if deterministic:
            right = cnt * int(pr)
            left = cnt * int(pl)
        else:
            right = rng.binomial(cnt, pr)
            rest = cnt - right
            left = rng.binomial(rest, min(pl / (1 - pr), 1.0)) if pr < 1 else np.zeros_like(rest)
        movers[0, :, lane] = right
        movers[1, :, lane] = left
        movers[2, :, lane] = cnt - right - left

    # New window starts one site further left: source row i lands on row
    # i + 2 (right), i + 1 (stay) or i (left).
    counts = np.zeros((n + 2, 2), dtype=np.int64)
    pops = [np.zeros((n + 2, 2), dtype=np.int64) for _ in range(3)]
    phs = [np.zeros((n + 2, 2)) for _ in range(3)]
    for k, off in ((2, 1), (0, 2), (1, 0)):  # stay, right, left
        pops[k][off : off + n] = movers[k]
        phs[k][off : off + n] = s.phases
        counts += pops[k]
    phases = _incoming_phase([pops[2], pops[0], pops[1]], [phs[2], phs[0], phs[1]])

    x, sp = s.marked
    lane = s.lane(sp)
    row = x - s.x_min
    r, l, st = (int(movers[k, row, lane]) for k in range(3))
    if deterministic:
        step = 1 if r else (-1 if l else 0)
    else:
        u = rng.integers(r + l + st)
        step = 1 if u < r else (-1 if u < r + l else 0)
    out = SpinSystemState(s.time + 1, s.x_min - 1, counts, phases, (x + step, sp), s.total)
    out.check()
    return out


def iter_active(
    cfg: RunConfig, params: SpinParams, rng: np.random.Generator | None = None
) -> Iterator[SpinSystemState]:
    """Yield the state at t = 0, 1, ..., cfg.steps.

    The start is the box-ball initial configuration, so with a shared
    generator both engines see the same preparation.
    """
    if rng is None:
        rng = trial_rng(cfg.seed, 0)
    sched = as_schedule(cfg.coin)
    s = SpinSystemState.from_boxes(init_lattice(cfg, rng))
    yield s
    for _ in range(cfg.steps):
        s = hop_step(spin_flip_step(s, sched, rng), params, rng)
        yield s


def run_active(
    cfg: RunConfig, params: SpinParams, rng: np.random.Generator | None = None
) -> SpinSystemState:
    for s in iter_active(cfg, params, rng):
        pass
    return s


def density_profile(s: SpinSystemState) -> Distribution:
    return Distribution.from_window(s.x_min, 1, s.density() / s.total)


def snapshot_rows(s: SpinSystemState) -> list[tuple[int, int, int, int, float]]:
    """One ``(t, x, s, n_xs, eta_xs)`` row per occupied (site, spin) bucket."""
    rows = []
    for i, x in enumerate(s.sites.tolist()):
        for lane, sp in enumerate(SPINS):
            if s.counts[i, lane] > 0:
                rows.append((s.time, x, sp, int(s.counts[i, lane]), wrap_phase(float(s.phases[i, lane]))))
    return rows
