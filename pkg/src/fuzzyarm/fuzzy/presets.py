"""Default controller rule base for positional-error servoing."""

from __future__ import annotations

from .membership import Universe
from .system import TERM_LABELS, IT2FuzzySystem, Rule, standard_variable


def servo_system(
    universe: Universe | None = None,
    sigma: float = 10.0,
    spread: float = 2.0,
    input_name: str = "error",
    output_name: str = "correction",
) -> IT2FuzzySystem:
    """Single-axis controller: each error term maps to the mirrored correction.

    A negative positional error produces a positive corrective movement and
    vice versa; the mirrored layout makes the controller antisymmetric.
    """
    universe = universe or Universe()
    error = standard_variable(input_name, universe, sigma, spread)
    correction = standard_variable(output_name, universe, sigma, spread)
    n = len(TERM_LABELS)
    rules = tuple(
        Rule(((input_name, TERM_LABELS[i]),), (output_name, TERM_LABELS[n - 1 - i]))
        for i in range(n)
    )
    return IT2FuzzySystem(inputs=(error,), outputs=(correction,), rules=rules)
