"""Gaussian membership primitives for type-1 and interval type-2 fuzzy sets.

An interval type-2 set is parameterized here by an uncertain mean: the
Gaussian's center slides inside [center - spread, center + spread], so the
footprint of uncertainty is bounded by two Gaussians of the same sigma.
Setting spread to zero collapses the set to an ordinary type-1 Gaussian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Universe:
    """Closed interval of discourse with a fixed diagnostic sample grid.

    Inference itself is analytic; the grid exists for plotting and
    inspection only.
    """

    lo: float = -100.0
    hi: float = 100.0
    points: int = 200

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"universe requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.points < 2:
            raise ValueError(f"universe requires at least 2 grid points, got {self.points}")

    def grid(self) -> np.ndarray:
        """Evenly spaced samples including both endpoints."""
        return np.linspace(self.lo, self.hi, self.points)

    def clamp(self, x: float) -> float:
        return min(max(x, self.lo), self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class FiringInterval:
    """Membership (or rule firing) degree bounded below and above."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.lower <= self.upper <= 1.0):
            raise ValueError(
                f"firing interval must satisfy 0 <= lower <= upper <= 1, "
                f"got [{self.lower}, {self.upper}]"
            )


@dataclass(frozen=True)
class GaussianMF:
    center: float
    sigma: float

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def degree(self, x: float) -> float:
        z = (x - self.center) / self.sigma
        return math.exp(-0.5 * z * z)


@dataclass(frozen=True)
class IT2GaussianMF:
    """Gaussian with an uncertain mean spanning [center - spread, center + spread]."""

    center: float
    sigma: float
    center_spread: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.center_spread < 0:
            raise ValueError(f"center spread must be nonnegative, got {self.center_spread}")

    def principal(self) -> GaussianMF:
        """Type-1 Gaussian at the nominal center (the spread ignored)."""
        return GaussianMF(self.center, self.sigma)

    def upper(self, x: float) -> float:
        # Max over admissible centers: the nearer one, saturating at 1 on
        # the plateau |x - center| <= spread.
        d = abs(x - self.center)
        if d <= self.center_spread:
            return 1.0
        z = (d - self.center_spread) / self.sigma
        return math.exp(-0.5 * z * z)

    def lower(self, x: float) -> float:
        # Min over admissible centers: the farther one.
        z = (abs(x - self.center) + self.center_spread) / self.sigma
        return math.exp(-0.5 * z * z)

    def degree_interval(self, x: float) -> FiringInterval:
        return FiringInterval(self.lower(x), self.upper(x))

    def centroid_interval(self) -> tuple[float, float]:
        """Analytic centroid of the set: the uncertain-mean interval itself."""
        return (self.center - self.center_spread, self.center + self.center_spread)


def mf_degree(x: float, mf: GaussianMF) -> float:
    """Type-1 Gaussian membership degree of x."""
    return mf.degree(x)


def it2_degree(x: float, mf: IT2GaussianMF) -> FiringInterval:
    """Lower/upper membership degrees of x under the uncertain-mean Gaussian."""
    return mf.degree_interval(x)
