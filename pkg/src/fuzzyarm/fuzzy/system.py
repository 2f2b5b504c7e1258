"""Mamdani rule base and the interval type-2 / type-1 inference paths.

Rules fire through the minimum t-norm (maximum s-norm across rules is implied
by center-of-sets reduction, which aggregates rule outputs by weighting
rather than by pointwise union). Systems are immutable once constructed and
safe to share across concurrent callers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .membership import FiringInterval, IT2GaussianMF, Universe
from .reduction import center_of_sets, defuzzify

# Linguistic term ladder used by the positional-error controller, ordered
# most-negative to most-positive.
TERM_LABELS: tuple[str, ...] = (
    "NegativeVeryLarge",
    "NegativeLarge",
    "NegativeMedium",
    "NegativeSmall",
    "NegativeVerySmall",
    "Zero",
    "PositiveVerySmall",
    "PositiveSmall",
    "PositiveMedium",
    "PositiveLarge",
    "PositiveVeryLarge",
)


class MissingInputError(KeyError):
    """A rule antecedent references an input variable that was not supplied."""


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    universe: Universe
    terms: tuple[tuple[str, IT2GaussianMF], ...]

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("variable name must be non-empty")
        if not self.terms:
            raise ValueError(f"variable {self.name!r} needs at least one term")
        labels = [label for label, _ in self.terms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"variable {self.name!r} has duplicate term labels")
        centers = [mf.center for _, mf in self.terms]
        if any(b <= a for a, b in zip(centers, centers[1:])):
            raise ValueError(f"variable {self.name!r} term centers must be strictly increasing")

    def term(self, label: str) -> IT2GaussianMF:
        for name, mf in self.terms:
            if name == label:
                return mf
        raise KeyError(f"variable {self.name!r} has no term {label!r}")

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.terms)


def standard_variable(
    name: str,
    universe: Universe | None = None,
    sigma: float = 10.0,
    spread: float = 2.0,
) -> LinguisticVariable:
    """Eleven-term variable with centers evenly spaced across the universe.

    The layout is symmetric about zero (center of term i equals the negated
    center of term 10-i) so that mirrored rule bases behave antisymmetrically.
    """
    universe = universe or Universe()
    n = len(TERM_LABELS)
    span = universe.hi - universe.lo
    centers = [universe.lo + span * i / (n - 1) for i in range(n)]
    for i in range(n):
        if abs(centers[i] + centers[n - 1 - i]) > 1e-9:
            raise ValueError("standard layout requires a universe symmetric about 0")
    terms = tuple(
        (label, IT2GaussianMF(center, sigma, spread)) for label, center in zip(TERM_LABELS, centers)
    )
    return LinguisticVariable(name, universe, terms)


@dataclass(frozen=True)
class Rule:
    antecedents: tuple[tuple[str, str], ...]  # (variable, term label)
    consequent: tuple[str, str]

    def __post_init__(self) -> None:
        if not self.antecedents:
            raise ValueError("rule needs at least one antecedent")


@dataclass(frozen=True)
class IT2FuzzySystem:
    inputs: tuple[LinguisticVariable, ...]
    outputs: tuple[LinguisticVariable, ...]
    rules: tuple[Rule, ...]
    t_norm: str = "minimum"
    s_norm: str = "maximum"

    def __post_init__(self) -> None:
        if self.t_norm != "minimum" or self.s_norm != "maximum":
            raise ValueError("only minimum/maximum norms are supported")
        if not self.rules:
            raise ValueError("system needs at least one rule")
        ins = {v.name: v for v in self.inputs}
        outs = {v.name: v for v in self.outputs}
        if len(ins) != len(self.inputs) or len(outs) != len(self.outputs):
            raise ValueError("variable names must be unique")
        for rule in self.rules:
            for var, label in rule.antecedents:
                if var not in ins:
                    raise ValueError(f"rule antecedent references unknown input {var!r}")
                if label not in ins[var].labels():
                    raise ValueError(f"rule antecedent references unknown term {var}.{label}")
            cvar, clabel = rule.consequent
            if cvar not in outs:
                raise ValueError(f"rule consequent references unknown output {cvar!r}")
            if clabel not in outs[cvar].labels():
                raise ValueError(f"rule consequent references unknown term {cvar}.{clabel}")

    def input_var(self, name: str) -> LinguisticVariable:
        for v in self.inputs:
            if v.name == name:
                return v
        raise KeyError(name)

    def output_var(self, name: str) -> LinguisticVariable:
        for v in self.outputs:
            if v.name == name:
                return v
        raise KeyError(name)


def fire_rules(
    inputs: Mapping[str, float], system: IT2FuzzySystem
) -> list[tuple[Rule, FiringInterval]]:
    """Firing interval per rule: elementwise minimum over antecedent degrees."""
    fired = []
    for rule in system.rules:
        lower = 1.0
        upper = 1.0
        for var, label in rule.antecedents:
            if var not in inputs:
                raise MissingInputError(f"input variable {var!r} missing from {sorted(inputs)}")
            interval = system.input_var(var).term(label).degree_interval(inputs[var])
            lower = min(lower, interval.lower)
            upper = min(upper, interval.upper)
        fired.append((rule, FiringInterval(lower, upper)))
    return fired


def _clamped(inputs: Mapping[str, float], system: IT2FuzzySystem) -> dict[str, float]:
    clamped = dict(inputs)
    for var in system.inputs:
        if var.name in clamped:
            clamped[var.name] = var.universe.clamp(clamped[var.name])
    return clamped


def evaluate(inputs: Mapping[str, float], system: IT2FuzzySystem) -> dict[str, float]:
    """Full interval type-2 inference: fire, type-reduce, defuzzify per output.

    Out-of-universe inputs are clamped to the variable's bounds so saturated
    errors still yield a maximal correction.
    """
    fired = fire_rules(_clamped(inputs, system), system)
    results: dict[str, float] = {}
    for out in system.outputs:
        pairs = [
            (interval, out.term(rule.consequent[1]).centroid_interval())
            for rule, interval in fired
            if rule.consequent[0] == out.name
        ]
        if not pairs:
            continue
        results[out.name] = defuzzify(center_of_sets(pairs))
    return results


def evaluate_t1(inputs: Mapping[str, float], system: IT2FuzzySystem) -> dict[str, float]:
    """Type-1 path over the same rule base: principal Gaussians, crisp centroids.

    Center-of-sets with degenerate intervals reduces to the firing-weighted
    mean of consequent centers.
    """
    clamped = _clamped(inputs, system)
    results: dict[str, float] = {}
    for out in system.outputs:
        num = 0.0
        den = 0.0
        for rule in system.rules:
            if rule.consequent[0] != out.name:
                continue
            strength = 1.0
            for var, label in rule.antecedents:
                if var not in clamped:
                    raise MissingInputError(f"input variable {var!r} missing from {sorted(clamped)}")
                strength = min(
                    strength, system.input_var(var).term(label).principal().degree(clamped[var])
                )
            num += strength * out.term(rule.consequent[1]).center
            den += strength
        if den == 0.0:
            raise ValueError(f"no rule fired for output {out.name!r}")
        results[out.name] = num / den
    return results


def check_coverage(system: IT2FuzzySystem, samples: int = 201) -> bool:
    """Diagnostic: does at least one rule fire everywhere on the input grids?

    Only meaningful for single-input systems; multi-input coverage is a
    semantic property of the rule table.
    """
    if len(system.inputs) != 1:
        raise ValueError("coverage check only supports single-input systems")
    var = system.inputs[0]
    lo, hi = var.universe.lo, var.universe.hi
    for i in range(samples):
        x = lo + (hi - lo) * i / (samples - 1)
        fired = fire_rules({var.name: x}, system)
        if all(interval.upper == 0.0 for _, interval in fired):
            return False
    return True
