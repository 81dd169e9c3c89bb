"""Exact complex-amplitude discrete-time quantum walk on the integer line.

This is the ground truth against which the classical engines are measured.
A walk step applies the coin

    C(xi, theta, zeta) = [[ e^{i xi} cos(theta),   e^{i zeta} sin(theta)],
                          [-e^{-i zeta} sin(theta), e^{-i xi} cos(theta)]]

optionally followed by a phase ``e^{i chi}`` on the coin-1 row, at every
site, and then moves coin-0 amplitude one site right and coin-1 amplitude
one site left. ``chi = 0`` is the plain SU(2) coin; the Hadamard matrix is
``(0, pi/4, 0)`` with ``chi = pi``. A constant ``chi`` multiplies every
amplitude at site x by the same factor after t steps, so it never changes
position probabilities, only phases.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Union

import numpy as np

from .distribution import Distribution
from .errors import ParameterError

_ZERO_AMPLITUDE = 1e-14


@dataclass(frozen=True)
class CoinParams:
    """Coin angles in radians; ``chi`` is the extra phase on the coin-1 row."""

    xi: float
    theta: float
    zeta: float
    chi: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= math.pi / 2):
            raise ParameterError(f"theta must lie in [0, pi/2], got {self.theta!r}")

    @classmethod
    def hadamard(cls) -> "CoinParams":
        return cls(0.0, math.pi / 4, 0.0, math.pi)

    def matrix(self) -> np.ndarray:
        return coin_matrix(self)


@dataclass(frozen=True)
class QubitSpec:
    """Polar form of psi0 = r0 e^{i phi0}, psi1 = r1 e^{i phi1}."""

    r0: float
    phi0: float
    r1: float
    phi1: float

    def __post_init__(self) -> None:
        if self.r0 < 0 or self.r1 < 0:
            raise ParameterError("moduli r0, r1 must be nonnegative")
        if abs(self.r0 * self.r0 + self.r1 * self.r1 - 1.0) > 1e-12:
            raise ParameterError(
                f"state is not normalized: r0^2 + r1^2 = {self.r0**2 + self.r1**2!r}"
            )

    @classmethod
    def from_amplitudes(cls, psi0: complex, psi1: complex) -> "QubitSpec":
        r0, r1 = abs(psi0), abs(psi1)
        return cls(r0, _phase(psi0.real, psi0.imag), r1, _phase(psi1.real, psi1.imag))

    @classmethod
    def symmetric(cls) -> "QubitSpec":
        """(|0> - i|1>)/sqrt(2), the start that gives a mirror-symmetric walk."""
        s = 1 / math.sqrt(2)
        return cls(s, 0.0, s, -math.pi / 2)

    @property
    def amplitudes(self) -> tuple[complex, complex]:
        return cmath.rect(self.r0, self.phi0), cmath.rect(self.r1, self.phi1)


class CoinSchedule:
    """Coin assignment for every (step, site) pair.

    Resolution order: explicit ``overrides[(t, x)]``, then ``rule(t, x)``
    if given, then ``default``.
    """

    def __init__(
        self,
        default: CoinParams | None = None,
        overrides: Mapping[tuple[int, int], CoinParams] | None = None,
        rule: Callable[[int, int], CoinParams | None] | None = None,
    ):
        self.default = default if default is not None else CoinParams.hadamard()
        self.overrides = dict(overrides or {})
        self.rule = rule

    @property
    def homogeneous(self) -> bool:
        return not self.overrides and self.rule is None

    def at(self, t: int, x: int) -> CoinParams:
        p = self.overrides.get((t, x))
        if p is None and self.rule is not None:
            p = self.rule(t, x)
        return p if p is not None else self.default

    def angles(self, t: int, sites: np.ndarray):
        """Return ``(xi, theta, zeta, chi)`` as scalars or per-site arrays."""
        if self.homogeneous:
            d = self.default
            return d.xi, d.theta, d.zeta, d.chi
        ps = [self.at(t, int(x)) for x in sites]
        return tuple(np.array([getattr(p, f) for p in ps]) for f in ("xi", "theta", "zeta", "chi"))

    def __repr__(self) -> str:
        return f"CoinSchedule(default={self.default!r}, overrides={len(self.overrides)}, rule={self.rule!r})"


CoinLike = Union[CoinParams, CoinSchedule]


def as_schedule(coins: CoinLike) -> CoinSchedule:
    return coins if isinstance(coins, CoinSchedule) else CoinSchedule(coins)


@dataclass
class AmplitudeField:
    """Coin-position amplitudes on the parity window of the walk.

    Row ``i`` of ``amps`` holds ``(psi[x, 0], psi[x, 1])`` for
    ``x = x_min + 2 * i``; sites of the other parity carry zero amplitude
    and are not stored.
    """

    x_min: int
    amps: np.ndarray
    time: int = 0

    @property
    def sites(self) -> np.ndarray:
        return self.x_min + 2 * np.arange(self.amps.shape[0], dtype=np.int64)

    @property
    def x_max(self) -> int:
        return self.x_min + 2 * (self.amps.shape[0] - 1)

    def amplitude(self, x: int, c: int) -> complex:
        i, r = divmod(x - self.x_min, 2)
        if r or not 0 <= i < self.amps.shape[0]:
            return 0j
        return complex(self.amps[i, c])

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    @classmethod
    def localized(cls, q: QubitSpec) -> "AmplitudeField":
        return cls(0, np.array([q.amplitudes], dtype=np.complex128), 0)


def _phase(re: float, im: float) -> float:
    if abs(re) <= _ZERO_AMPLITUDE and abs(im) <= _ZERO_AMPLITUDE:
        return 0.0
    phi = math.atan2(im, re)
    return math.pi if phi == -math.pi else phi


def coin_matrix(p: CoinParams) -> np.ndarray:
    c, s = math.cos(p.theta), math.sin(p.theta)
    return np.array(
        [
            [cmath.exp(1j * p.xi) * c, cmath.exp(1j * p.zeta) * s],
            [-cmath.exp(1j * (p.chi - p.zeta)) * s, cmath.exp(1j * (p.chi - p.xi)) * c],
        ],
        dtype=np.complex128,
    )


def qubit_measure_probs(q: QubitSpec) -> tuple[float, float]:
    return q.r0 * q.r0, q.r1 * q.r1


def apply_coin_qubit(q: QubitSpec, p: CoinParams) -> QubitSpec:
    """Apply the coin to a polar-form qubit using real arithmetic only.

    Each output amplitude is assembled from its real and imaginary parts; the
    phase is ``atan2(imag, real)`` and is 0 for a vanishing amplitude.
    """
    c, s = math.cos(p.theta), math.sin(p.theta)
    a0 = q.r0 * c * math.cos(p.xi + q.phi0) + q.r1 * s * math.cos(p.zeta + q.phi1)
    b0 = q.r0 * c * math.sin(p.xi + q.phi0) + q.r1 * s * math.sin(p.zeta + q.phi1)
    a1 = -q.r0 * s * math.cos(q.phi0 - p.zeta + p.chi) + q.r1 * c * math.cos(q.phi1 - p.xi + p.chi)
    b1 = -q.r0 * s * math.sin(q.phi0 - p.zeta + p.chi) + q.r1 * c * math.sin(q.phi1 - p.xi + p.chi)
    r0, r1 = math.hypot(a0, b0), math.hypot(a1, b1)
    # Renormalize away rounding so the result passes QubitSpec's 1e-12 check.
    norm = math.hypot(r0, r1)
    return QubitSpec(r0 / norm, _phase(a0, b0), r1 / norm, _phase(a1, b1))


def _coin_entries(xi, theta, zeta, chi):
    c, s = np.cos(theta), np.sin(theta)
    return (
        np.exp(1j * xi) * c,
        np.exp(1j * zeta) * s,
        -np.exp(1j * (chi - zeta)) * s,
        np.exp(1j * (chi - xi)) * c,
    )


def walk_step(field: AmplitudeField, coins: CoinLike, t: int | None = None) -> AmplitudeField:
    """One coin-then-shift step; the window grows by one site on each side."""
    t = field.time if t is None else t
    sched = as_schedule(coins)
    a, b, c, d = _coin_entries(*sched.angles(t, field.sites))
    psi0, psi1 = field.amps[:, 0], field.amps[:, 1]
    n = field.amps.shape[0]
    out = np.zeros((n + 1, 2), dtype=np.complex128)
    out[1:, 0] = a * psi0 + b * psi1
    out[:-1, 1] = c * psi0 + d * psi1
    return AmplitudeField(field.x_min - 1, out, t + 1)


def evolve(initial: QubitSpec, coins: CoinLike, steps: int) -> AmplitudeField:
    if steps < 0:
        raise ParameterError("steps must be nonnegative")
    sched = as_schedule(coins)
    f = AmplitudeField.localized(initial)
    for t in range(steps):
        f = walk_step(f, sched, t)
    return f


def position_distribution(field: AmplitudeField) -> Distribution:
    mass = np.sum(np.abs(field.amps) ** 2, axis=1)
    return Distribution.from_window(field.x_min, 2, mass)


def amplitude_phases(field: AmplitudeField) -> np.ndarray:
    """``arg(psi)`` per stored (site, coin) entry, 0 where the amplitude vanishes."""
    ph = np.angle(field.amps)
    ph[np.abs(field.amps) <= _ZERO_AMPLITUDE] = 0.0
    return ph
