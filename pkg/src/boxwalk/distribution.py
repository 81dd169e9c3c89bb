"""A site-indexed probability distribution on the integer line."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np


@dataclass(frozen=True)
class Distribution:
    """Probability masses on a finite set of integer sites.

    ``sites`` is strictly increasing; zero-mass sites may be present.
    """

    sites: np.ndarray
    mass: np.ndarray

    def __post_init__(self) -> None:
        sites = np.asarray(self.sites, dtype=np.int64)
        mass = np.asarray(self.mass, dtype=np.float64)
        if sites.shape != mass.shape or sites.ndim != 1:
            raise ValueError("sites and mass must be 1-D arrays of equal length")
        if sites.size > 1 and np.any(np.diff(sites) <= 0):
            raise ValueError("sites must be strictly increasing")
        if np.any(mass < 0):
            raise ValueError("masses must be nonnegative")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "mass", mass)

    @classmethod
    def from_mapping(cls, masses: Mapping[int, float]) -> "Distribution":
        keys = sorted(masses)
        return cls(np.array(keys, dtype=np.int64), np.array([masses[k] for k in keys], dtype=np.float64))

    @classmethod
    def from_window(cls, x_min: int, stride: int, mass: np.ndarray) -> "Distribution":
        """Build from a dense array of masses at ``x_min + stride * i``."""
        sites = x_min + stride * np.arange(len(mass), dtype=np.int64)
        return cls(sites, mass)

    def total(self) -> float:
        return float(self.mass.sum())

    def trimmed(self) -> "Distribution":
        """Drop zero-mass sites."""
        keep = self.mass > 0
        return Distribution(self.sites[keep], self.mass[keep])

    def as_dict(self) -> dict[int, float]:
        return {int(x): float(p) for x, p in zip(self.sites, self.mass) if p > 0}

    def __getitem__(self, site: int) -> float:
        i = np.searchsorted(self.sites, site)
        if i < self.sites.size and self.sites[i] == site:
            return float(self.mass[i])
        return 0.0

    def __iter__(self) -> Iterator[tuple[int, float]]:
        return iter(zip(self.sites.tolist(), self.mass.tolist()))

    def __len__(self) -> int:
        return int(self.sites.size)


def as_distribution(p: Distribution | Mapping[int, float]) -> Distribution:
    if isinstance(p, Distribution):
        return p
    return Distribution.from_mapping(p)
