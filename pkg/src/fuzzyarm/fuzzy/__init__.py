"""Type-1 / interval type-2 Mamdani inference engine."""

from .config import load_system, save_system, system_from_config, system_to_config
from .membership import (
    FiringInterval,
    GaussianMF,
    IT2GaussianMF,
    Universe,
    it2_degree,
    mf_degree,
)
from .presets import servo_system
from .reduction import (
    NoRuleFiredError,
    TypeReducedInterval,
    center_of_sets,
    defuzzify,
    karnik_mendel_bound,
)
from .system import (
    TERM_LABELS,
    IT2FuzzySystem,
    LinguisticVariable,
    MissingInputError,
    Rule,
    check_coverage,
    evaluate,
    evaluate_t1,
    fire_rules,
    standard_variable,
)

__all__ = [
    "FiringInterval",
    "GaussianMF",
    "IT2FuzzySystem",
    "IT2GaussianMF",
    "LinguisticVariable",
    "MissingInputError",
    "NoRuleFiredError",
    "Rule",
    "TERM_LABELS",
    "TypeReducedInterval",
    "Universe",
    "center_of_sets",
    "check_coverage",
    "defuzzify",
    "evaluate",
    "evaluate_t1",
    "fire_rules",
    "it2_degree",
    "karnik_mendel_bound",
    "load_system",
    "mf_degree",
    "save_system",
    "servo_system",
    "standard_variable",
    "system_from_config",
    "system_to_config",
]
