"""Declarative JSON configuration for variables and rule bases.

Schema (all keys required unless noted):

    {
      "inputs":  [ {"name": str,
                    "universe": {"lo": num, "hi": num, "points": int (optional)},
                    "terms": [ {"label": str, "center": num, "sigma": num,
                                "spread": num (optional, default 0)} ]} ],
      "outputs": [ ...same shape... ],
      "rules":   [ {"if": {variable: term_label, ...},
                    "then": [variable, term_label]} ]
    }
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .membership import IT2GaussianMF, Universe
from .system import IT2FuzzySystem, LinguisticVariable, Rule


def _variable_from_config(cfg: Mapping[str, Any]) -> LinguisticVariable:
    uni = cfg["universe"]
    universe = Universe(float(uni["lo"]), float(uni["hi"]), int(uni.get("points", 200)))
    terms = tuple(
        (
            t["label"],
            IT2GaussianMF(float(t["center"]), float(t["sigma"]), float(t.get("spread", 0.0))),
        )
        for t in cfg["terms"]
    )
    return LinguisticVariable(cfg["name"], universe, terms)


def system_from_config(cfg: Mapping[str, Any]) -> IT2FuzzySystem:
    inputs = tuple(_variable_from_config(v) for v in cfg["inputs"])
    outputs = tuple(_variable_from_config(v) for v in cfg["outputs"])
    rules = tuple(
        Rule(tuple(sorted(r["if"].items())), (r["then"][0], r["then"][1])) for r in cfg["rules"]
    )
    return IT2FuzzySystem(inputs=inputs, outputs=outputs, rules=rules)


def _variable_to_config(var: LinguisticVariable) -> dict[str, Any]:
    return {
        "name": var.name,
        "universe": {"lo": var.universe.lo, "hi": var.universe.hi, "points": var.universe.points},
        "terms": [
            {"label": label, "center": mf.center, "sigma": mf.sigma, "spread": mf.center_spread}
            for label, mf in var.terms
        ],
    }


def system_to_config(system: IT2FuzzySystem) -> dict[str, Any]:
    return {
        "inputs": [_variable_to_config(v) for v in system.inputs],
        "outputs": [_variable_to_config(v) for v in system.outputs],
        "rules": [
            {"if": dict(rule.antecedents), "then": list(rule.consequent)}
            for rule in system.rules
        ],
    }


def load_system(path: str | Path) -> IT2FuzzySystem:
    with open(path, encoding="utf-8") as fh:
        return system_from_config(json.load(fh))


def save_system(system: IT2FuzzySystem, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(system_to_config(system), fh, indent=2, sort_keys=True)
        fh.write("\n")
