"""Karnik-Mendel center-of-sets type reduction and crisp defuzzification.

Center-of-sets reduction collapses an interval type-2 rule output into a
crisp interval [y_l, y_r]:

    y_l = min over f_i in [lo_i, hi_i] of  sum(f_i * c_i) / sum(f_i)
    y_r = max over the same choices

where c_i are the left (for y_l) or right (for y_r) endpoints of each rule's
consequent centroid interval. Both extrema are attained at a "switch point":
rules with centroids on one side of the result take their upper firing
degree, the rest take their lower one. The classic Karnik-Mendel iteration
locates that switch point and provably terminates in at most as many
iterations as there are rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .membership import FiringInterval


class NoRuleFiredError(RuntimeError):
    """All firing intervals are zero: the rule base does not cover the input."""


@dataclass(frozen=True)
class TypeReducedInterval:
    y_l: float
    y_r: float

    def __post_init__(self) -> None:
        if self.y_l > self.y_r:
            raise ValueError(f"type-reduced interval requires y_l <= y_r, got [{self.y_l}, {self.y_r}]")


def karnik_mendel_bound(
    centroids: Sequence[float],
    f_lower: Sequence[float],
    f_upper: Sequence[float],
    *,
    right: bool,
) -> tuple[float, int]:
    """One Karnik-Mendel bound (left or right) plus the iteration count.

    Inputs must already be sorted by centroid ascending and every rule must
    have a positive upper firing degree. Returns (bound, iterations); the
    iteration count is the number of switch-point reassignments performed.
    """
    n = len(centroids)
    f = [(lo + hi) / 2.0 for lo, hi in zip(f_lower, f_upper)]
    den = sum(f)
    y = sum(fi * ci for fi, ci in zip(f, centroids)) / den
    for iteration in range(1, n + 1):
        if right:
            f = [f_lower[i] if centroids[i] <= y else f_upper[i] for i in range(n)]
        else:
            f = [f_upper[i] if centroids[i] <= y else f_lower[i] for i in range(n)]
        den = sum(f)
        if den == 0.0:
            # All weight collapsed onto the boundary centroid: y already sits
            # at the extreme (happens e.g. for a single rule with zero lower
            # firing degree), so it is the bound.
            return y, iteration
        y_new = sum(fi * ci for fi, ci in zip(f, centroids)) / den
        if y_new == y:
            return y, iteration
        y = y_new
    return y, n


def center_of_sets(
    firings: Sequence[tuple[FiringInterval, tuple[float, float]]],
) -> TypeReducedInterval:
    """Type-reduce (firing interval, consequent centroid interval) pairs.

    Raises NoRuleFiredError when every firing interval is zero, which
    signals a rule-base coverage bug rather than a numerical condition.
    """
    active = [(fi, c) for fi, c in firings if fi.upper > 0.0]
    if not active:
        raise NoRuleFiredError("no rule fired: every firing interval is zero")

    left = sorted(active, key=lambda pair: pair[1][0])
    y_l, _ = karnik_mendel_bound(
        [c[0] for _, c in left],
        [fi.lower for fi, _ in left],
        [fi.upper for fi, _ in left],
        right=False,
    )
    right_sorted = sorted(active, key=lambda pair: pair[1][1])
    y_r, _ = karnik_mendel_bound(
        [c[1] for _, c in right_sorted],
        [fi.lower for fi, _ in right_sorted],
        [fi.upper for fi, _ in right_sorted],
        right=True,
    )
    return TypeReducedInterval(y_l, y_r)


def defuzzify(interval: TypeReducedInterval) -> float:
    """Crisp output: the midpoint of the type-reduced interval."""
    return (interval.y_l + interval.y_r) / 2.0
