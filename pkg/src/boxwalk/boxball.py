"""Classical boxes-and-balls emulation of the discrete-time quantum walk.

Balls are never individuated. A state is a set of occupation numbers with
one real phase tag per box, plus the coordinate of a single marked ball.
The coin update at a site turns ``(N0, N1, eta0, eta1)`` into a target
occupation ``N0~``, rounds it to floor or ceil with probability 1/2 each,
moves the difference between the two boxes, and recomputes the phase
tags. The shift then carries box 0 one site right and box 1 one site
left, phases included.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .distribution import Distribution
from .errors import ConservationError, ParameterError
from .quantum_reference import CoinLike, CoinParams, QubitSpec, as_schedule
from .streams import trial_rng

_EPS = np.finfo(np.float64).eps
_ZERO_AMPLITUDE = 1e-14


# -- per-site kernels --------------------------------------------------------


def coin_weights(theta):
    """Return ``(cos^2, sin^2, sin*cos)`` of theta via double-angle forms.

    At theta = pi/4 this gives exactly (0.5, 0.5, 0.5): cos(pi/2) rounds
    to ~6e-17, which vanishes in ``1 + c2``, and ``1 - 0.5`` is exact. The
    general target occupation therefore collapses bit-for-bit onto the
    Hadamard one.
    """
    theta = np.asarray(theta, dtype=np.float64)
    cc = (1 + np.cos(2 * theta)) / 2
    return cc, 1 - cc, np.sin(2 * theta) / 2


def target_occupation(n0, n1, eta0, eta1, xi, theta, zeta):
    """Unrounded, unclamped target count of box 0 after the coin."""
    n0 = np.asarray(n0, dtype=np.float64)
    n1 = np.asarray(n1, dtype=np.float64)
    cc, ss, sc = coin_weights(theta)
    interference = np.cos((np.asarray(eta0) - eta1) + (np.asarray(xi) - zeta))
    return n0 * cc + n1 * ss + 2 * np.sqrt(n0 * n1) * sc * interference


def hadamard_target_occupation(n0, n1, eta0, eta1):
    """Target count for the Hadamard coin in its original closed form."""
    n0 = np.asarray(n0, dtype=np.float64)
    n1 = np.asarray(n1, dtype=np.float64)
    return (n0 + n1) / 2 + np.sqrt(n0 * n1) * np.cos(np.asarray(eta1) - eta0)


def _atan2_or_zero(b, a):
    ph = np.arctan2(b, a)
    ph = np.where((np.abs(a) <= _ZERO_AMPLITUDE) & (np.abs(b) <= _ZERO_AMPLITUDE), 0.0, ph)
    return np.where(ph == -np.pi, np.pi, ph)


def coin_phases(n0, n1, eta0, eta1, xi, theta, zeta, chi=0.0):
    """Updated phase tags ``(eta0', eta1')`` from occupation fractions.

    The square roots of ``N_c / (N0 + N1)`` stand in for the amplitude
    moduli; only ratios enter, so any common normalization gives the same
    angles. Box 1 uses the second coin row,
    ``e^{i chi} (-e^{-i zeta} sin(theta), e^{-i xi} cos(theta))``.
    """
    n0 = np.asarray(n0, dtype=np.float64)
    n1 = np.asarray(n1, dtype=np.float64)
    tot = n0 + n1
    tot = np.where(tot > 0, tot, 1.0)
    f0, f1 = np.sqrt(n0 / tot), np.sqrt(n1 / tot)
    c, s = np.cos(theta), np.sin(theta)
    a0 = f0 * c * np.cos(xi + eta0) + f1 * s * np.cos(zeta + eta1)
    b0 = f0 * c * np.sin(xi + eta0) + f1 * s * np.sin(zeta + eta1)
    a1 = -f0 * s * np.cos(eta0 - zeta + chi) + f1 * c * np.cos(eta1 - xi + chi)
    b1 = -f0 * s * np.sin(eta0 - zeta + chi) + f1 * c * np.sin(eta1 - xi + chi)
    return _atan2_or_zero(b0, a0), _atan2_or_zero(b1, a1)


def randomized_round(target, total, rng: np.random.Generator) -> np.ndarray:
    """Floor or ceil of ``target`` with probability 1/2 each, clamped to [0, total].

    One fair bit is drawn per entry whether or not it is needed, keeping the
    random stream aligned across engines. Targets within a few ulps of an
    integer are treated as that integer.
    """
    target = np.atleast_1d(np.asarray(target, dtype=np.float64))
    total = np.atleast_1d(np.asarray(total, dtype=np.int64))
    bits = rng.integers(0, 2, size=target.shape)
    tol = 16 * _EPS * np.maximum(total, 1)
    nearest = np.rint(target)
    fl = np.floor(target)
    out = np.where(np.abs(target - nearest) <= tol, nearest, fl + bits)
    return np.clip(out, 0, total).astype(np.int64)


def coin_update(n0, n1, eta0, eta1, xi, theta, zeta, chi, rng):
    """Apply the stochastic coin to occupied sites; returns ``(N0', eta0', eta1')``."""
    total = np.asarray(n0, dtype=np.int64) + n1
    new0 = randomized_round(target_occupation(n0, n1, eta0, eta1, xi, theta, zeta), total, rng)
    e0, e1 = coin_phases(n0, n1, eta0, eta1, xi, theta, zeta, chi)
    e0 = np.where(new0 == 0, 0.0, e0)
    e1 = np.where(total - new0 == 0, 0.0, e1)
    return new0, e0, e1


def marked_leaves(n_before: int, n_after: int, rng: np.random.Generator) -> bool:
    """Whether the marked ball is among the ``n_before - n_after`` balls taken out.

    A uniformly random subset of size k drawn from n balls contains a given
    ball with probability k/n. No draw is made when nothing leaves.
    """
    k = n_before - n_after
    if k <= 0:
        return False
    return bool(rng.integers(n_before) < k)


def wrap_phase(phi):
    """Reduce angles to (-pi, pi]."""
    out = np.pi - np.mod(np.pi - np.asarray(phi, dtype=np.float64), 2 * np.pi)
    return out if np.ndim(out) else float(out)


# -- two-box system ----------------------------------------------------------


@dataclass(frozen=True)
class TwoBoxState:
    n0: int
    n1: int
    eta0: float
    eta1: float
    marked_in: int

    def __post_init__(self) -> None:
        if self.n0 < 0 or self.n1 < 0 or self.n0 + self.n1 < 1:
            raise ParameterError("occupations must be nonnegative with a positive total")
        if self.marked_in not in (0, 1) or (self.n0, self.n1)[self.marked_in] < 1:
            raise ParameterError("the marked ball must sit in a nonempty box")

    @property
    def total(self) -> int:
        return self.n0 + self.n1


@dataclass(frozen=True)
class PrepConfig:
    total: int
    rho0: float
    phi0: float = 0.0
    phi1: float = 0.0

    def __post_init__(self) -> None:
        if self.total < 1:
            raise ParameterError("total must be at least 1")
        if not 0.0 <= self.rho0 <= 1.0:
            raise ParameterError(f"rho0 must lie in [0, 1], got {self.rho0!r}")


def prepare_two_box(cfg: PrepConfig, rng: np.random.Generator) -> TwoBoxState:
    n0 = int(randomized_round(cfg.rho0 * cfg.total, cfg.total, rng)[0])
    marked = 0 if rng.integers(cfg.total) < n0 else 1
    return TwoBoxState(n0, cfg.total - n0, cfg.phi0, cfg.phi1, marked)


def tilde_n0(s: TwoBoxState, p: CoinParams) -> float:
    raw = float(target_occupation(s.n0, s.n1, s.eta0, s.eta1, p.xi, p.theta, p.zeta))
    return min(max(raw, 0.0), float(s.total))


def phase_update(s: TwoBoxState, p: CoinParams) -> tuple[float, float]:
    e0, e1 = coin_phases(s.n0, s.n1, s.eta0, s.eta1, p.xi, p.theta, p.zeta, p.chi)
    return float(e0), float(e1)


def transform_two_box(s: TwoBoxState, p: CoinParams, rng: np.random.Generator) -> TwoBoxState:
    new0, e0, e1 = coin_update(s.n0, s.n1, s.eta0, s.eta1, p.xi, p.theta, p.zeta, p.chi, rng)
    n0 = int(new0[0])
    n1 = s.total - n0
    before = (s.n0, s.n1)[s.marked_in]
    after = (n0, n1)[s.marked_in]
    marked = 1 - s.marked_in if marked_leaves(before, after, rng) else s.marked_in
    return TwoBoxState(n0, n1, float(e0[0]), float(e1[0]), marked)


def measure_two_box(s: TwoBoxState) -> tuple[int, TwoBoxState]:
    n = s.total
    post = TwoBoxState(n, 0, 0.0, 0.0, 0) if s.marked_in == 0 else TwoBoxState(0, n, 0.0, 0.0, 1)
    return s.marked_in, post


# -- lattice model -----------------------------------------------------------


@dataclass
class RunConfig:
    coin: CoinLike
    initial: QubitSpec
    total: int
    steps: int
    seed: int = 0
    trials: int = 1

    def __post_init__(self) -> None:
        if self.total < 1:
            raise ParameterError("total must be at least 1")
        if self.steps < 0:
            raise ParameterError("steps must be nonnegative")
        if self.trials < 1:
            raise ParameterError("trials must be at least 1")


@dataclass
class BoxLatticeState:
    """Occupations and phase tags on the parity window ``x_min, x_min + 2, ...``.

    ``occ[i, c]`` and ``phase[i, c]`` belong to box ``(x_min + 2 i, c)``.
    ``marked`` is the ``(x, c)`` box holding the marked ball.
    """

    time: int
    x_min: int
    occ: np.ndarray
    phase: np.ndarray
    marked: tuple[int, int]
    total: int

    @property
    def sites(self) -> np.ndarray:
        return self.x_min + 2 * np.arange(self.occ.shape[0], dtype=np.int64)

    def row(self, x: int) -> int:
        i, r = divmod(x - self.x_min, 2)
        if r or not 0 <= i < self.occ.shape[0]:
            raise IndexError(f"site {x} is outside the stored window")
        return i

    def count(self, x: int, c: int) -> int:
        try:
            return int(self.occ[self.row(x), c])
        except IndexError:
            return 0

    def check(self) -> None:
        if int(self.occ.sum()) != self.total:
            raise ConservationError(
                f"ball count {int(self.occ.sum())} != {self.total} at t={self.time}"
            )
        if np.any(self.occ < 0):
            raise ConservationError(f"negative occupation at t={self.time}")
        if self.count(*self.marked) < 1:
            raise ConservationError(f"marked ball sits in empty box {self.marked} at t={self.time}")


def init_lattice(cfg: RunConfig, rng: np.random.Generator) -> BoxLatticeState:
    q = cfg.initial
    n = cfg.total
    n00 = int(randomized_round(q.r0 * q.r0 * n, n, rng)[0])
    occ = np.array([[n00, n - n00]], dtype=np.int64)
    phase = np.array([[q.phi0, q.phi1]], dtype=np.float64)
    marked = (0, 0) if rng.integers(n) < n00 else (0, 1)
    return BoxLatticeState(0, 0, occ, phase, marked, n)


def coin_substep(occ: np.ndarray, phase: np.ndarray, angles, marked_row, marked_c, rngs):
    """Coin update on a batch of lattices, one generator per lattice.

    ``occ`` and ``phase`` have shape ``(B, n, 2)``; ``angles`` are scalars or
    per-row arrays of length ``n``; ``marked_row`` and ``marked_c`` have shape
    ``(B,)``. Each generator draws one fair bit per occupied row of its own
    lattice, in row order, then at most one integer for the marked ball.
    Shared by the box-ball and active-spin engines so both consume their
    random streams identically.
    """
    n0, n1 = occ[..., 0], occ[..., 1]
    tot = n0 + n1
    active = tot > 0
    xi, th, ze, chi = angles
    target = target_occupation(n0, n1, phase[..., 0], phase[..., 1], xi, th, ze)
    e0, e1 = coin_phases(n0, n1, phase[..., 0], phase[..., 1], xi, th, ze, chi)

    bits = np.zeros(tot.shape, dtype=np.int64)
    draws = [g.integers(0, 2, size=int(k)) for g, k in zip(rngs, active.sum(axis=1))]
    bits[active] = np.concatenate(draws)
    tol = 16 * _EPS * np.maximum(tot, 1)
    nearest = np.rint(target)
    new0 = np.where(np.abs(target - nearest) <= tol, nearest, np.floor(target) + bits)
    new0 = np.clip(new0, 0, tot).astype(np.int64)

    new_occ = np.stack([new0, tot - new0], axis=-1)
    new_phase = np.stack([np.where(new0 == 0, 0.0, e0), np.where(tot - new0 == 0, 0.0, e1)], axis=-1)

    b = np.arange(occ.shape[0])
    before = occ[b, marked_row, marked_c]
    after = new_occ[b, marked_row, marked_c]
    marked_c = np.array(marked_c, dtype=np.int64, copy=True)
    for j in np.flatnonzero(before > after):
        if marked_leaves(int(before[j]), int(after[j]), rngs[j]):
            marked_c[j] = 1 - marked_c[j]
    return new_occ, new_phase, marked_c


def shift(occ: np.ndarray, phase: np.ndarray):
    """Conditional shift on the parity window: box 0 moves right, box 1 left.

    With rows at ``x_min + 2 i``, site ``x + 1`` is row ``i + 1`` of the new
    window starting at ``x_min - 1`` and ``x - 1`` is row ``i``.
    """
    shape = occ.shape[:-2] + (occ.shape[-2] + 1, 2)
    out_occ = np.zeros(shape, dtype=occ.dtype)
    out_phase = np.zeros(shape, dtype=phase.dtype)
    out_occ[..., 1:, 0] = occ[..., 0]
    out_occ[..., :-1, 1] = occ[..., 1]
    out_phase[..., 1:, 0] = phase[..., 0]
    out_phase[..., :-1, 1] = phase[..., 1]
    return out_occ, out_phase


def lattice_step(s: BoxLatticeState, coins: CoinLike, rng: np.random.Generator) -> BoxLatticeState:
    sched = as_schedule(coins)
    mx, mc = s.marked
    new_occ, new_phase, mcs = coin_substep(
        s.occ[None], s.phase[None], sched.angles(s.time, s.sites), [s.row(mx)], [mc], [rng]
    )
    occ, phase = shift(new_occ, new_phase)
    mc = int(mcs[0])
    out = BoxLatticeState(s.time + 1, s.x_min - 1, occ[0], phase[0], (mx + 1 if mc == 0 else mx - 1, mc), s.total)
    out.check()
    return out


@dataclass
class BatchResult:
    """Final states and marked-ball trajectories of lattices run in lockstep."""

    finals: list[BoxLatticeState]
    trajectories: np.ndarray


def run_lattice_batch(cfg: RunConfig, rngs: list[np.random.Generator]) -> BatchResult:
    """Run ``len(rngs)`` independent lattices together.

    Lattice ``j`` is bit-identical to ``run_lattice(cfg, rngs[j])``; batching
    only amortizes the array work.
    """
    sched = as_schedule(cfg.coin)
    inits = [init_lattice(cfg, g) for g in rngs]
    B = len(rngs)
    occ = np.stack([s.occ for s in inits])
    phase = np.stack([s.phase for s in inits])
    mx = np.array([s.marked[0] for s in inits], dtype=np.int64)
    mc = np.array([s.marked[1] for s in inits], dtype=np.int64)
    traj = np.empty((B, cfg.steps + 1), dtype=np.int64)
    traj[:, 0] = mx
    x_min = 0
    for t in range(cfg.steps):
        sites = x_min + 2 * np.arange(occ.shape[1], dtype=np.int64)
        occ, phase, mc = coin_substep(occ, phase, sched.angles(t, sites), (mx - x_min) // 2, mc, rngs)
        occ, phase = shift(occ, phase)
        x_min -= 1
        mx = np.where(mc == 0, mx + 1, mx - 1)
        traj[:, t + 1] = mx
        sums = occ.sum(axis=(1, 2))
        if np.any(sums != cfg.total):
            j = int(np.flatnonzero(sums != cfg.total)[0])
            raise ConservationError(f"ball count {int(sums[j])} != {cfg.total} at t={t + 1}")
    finals = [
        BoxLatticeState(cfg.steps, x_min, occ[j], phase[j], (int(mx[j]), int(mc[j])), cfg.total)
        for j in range(B)
    ]
    for f in finals:
        f.check()
    return BatchResult(finals, traj)


def run_lattice(
    cfg: RunConfig, rng: np.random.Generator | None = None
) -> tuple[BoxLatticeState, list[int]]:
    """Initialize and iterate coin and shift ``cfg.steps`` times.

    The trajectory lists the marked ball's site at t = 0, 1, ..., steps.
    """
    if rng is None:
        rng = trial_rng(cfg.seed, 0)
    sched = as_schedule(cfg.coin)
    s = init_lattice(cfg, rng)
    traj = [s.marked[0]]
    for _ in range(cfg.steps):
        s = lattice_step(s, sched, rng)
        traj.append(s.marked[0])
    return s, traj


def measure_lattice(s: BoxLatticeState) -> tuple[int, BoxLatticeState]:
    x, c = s.marked
    occ = np.zeros_like(s.occ)
    occ[s.row(x), c] = s.total
    return x, replace(s, occ=occ, phase=np.zeros_like(s.phase))


def occupation_distribution(s: BoxLatticeState) -> Distribution:
    return Distribution.from_window(s.x_min, 2, (s.occ[:, 0] + s.occ[:, 1]) / s.total)


def snapshot_rows(s: BoxLatticeState) -> list[tuple[int, int, int, int, float]]:
    """One ``(t, x, c, N_xc, eta_xc)`` row per occupied box, ordered by (x, c)."""
    rows = []
    for i, x in enumerate(s.sites.tolist()):
        for c in (0, 1):
            if s.occ[i, c] > 0:
                rows.append((s.time, x, c, int(s.occ[i, c]), wrap_phase(float(s.phase[i, c]))))
    return rows

