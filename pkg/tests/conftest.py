import math

import numpy as np
import pytest

from boxwalk import CoinParams, QubitSpec


@pytest.fixture
def hadamard():
    return CoinParams.hadamard()


@pytest.fixture
def symmetric_start():
    return QubitSpec.symmetric()


@pytest.fixture
def up():
    return QubitSpec(1.0, 0.0, 0.0, 0.0)


def dense_walk_distribution(psi0: complex, psi1: complex, coin: np.ndarray, steps: int) -> dict:
    """Brute force: build the full walk unitary on a ring of 2*steps+3 sites.

    Independent of the windowed implementation; the ring is wide enough that
    wrap-around never happens within ``steps``.
    """
    L = 2 * steps + 3
    dim = 2 * L
    S = np.zeros((dim, dim), dtype=complex)
    for x in range(L):
        S[2 * ((x + 1) % L) + 0, 2 * x + 0] = 1
        S[2 * ((x - 1) % L) + 1, 2 * x + 1] = 1
    W = S @ np.kron(np.eye(L), coin)
    psi = np.zeros(dim, dtype=complex)
    origin = steps + 1
    psi[2 * origin] = psi0
    psi[2 * origin + 1] = psi1
    for _ in range(steps):
        psi = W @ psi
    prob = np.abs(psi.reshape(L, 2)) ** 2
    return {x - origin: float(prob[x].sum()) for x in range(L) if prob[x].sum() > 0}


def random_qubit(rng) -> QubitSpec:
    a = rng.uniform(0, 1)
    return QubitSpec(math.sqrt(a), rng.uniform(-math.pi, math.pi), math.sqrt(1 - a), rng.uniform(-math.pi, math.pi))


def random_coin(rng) -> CoinParams:
    return CoinParams(
        rng.uniform(-math.pi, math.pi),
        rng.uniform(0, math.pi / 2),
        rng.uniform(-math.pi, math.pi),
        rng.choice([0.0, math.pi, rng.uniform(-math.pi, math.pi)]),
    )


def angle_diff(a, b):
    return np.abs(np.angle(np.exp(1j * (np.asarray(a) - np.asarray(b)))))
