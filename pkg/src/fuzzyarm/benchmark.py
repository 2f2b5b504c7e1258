"""Bundled benchmark: table scenes and a scripted 60-trial batch.

Scripts are line-delimited JSON; each line carries the utterance, the
expectations every stage is judged against, and the trial seed. Fault
injection is part of the script itself (an "inject" list per trial), so a
configured fault pattern reproduces exactly, not just in expectation.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .grammar import actions_to_json
from .pipeline import phrase_to_actions
from .scene import Scene, NoiseModel, save_scene
from .perception import BBox

DATA_PACKAGE = "fuzzyarm.data.benchmark"
SCRIPT_NAME = "trials_60.jsonl"


def table_scene(variant: int = 0, seed: int = 0) -> Scene:
    """One of three printed-fruit table layouts plus the user's hand.

    All layouts share the same relative structure (apple left of orange,
    lemon above orange, hand far from the fruit) so every scripted goal
    below starts unsatisfied; a sabotaged motion stage is then always
    observable as a failed final predicate.
    """
    layouts = [
        {
            "apple": BBox(220, 420, 285, 485),
            "orange": BBox(640, 430, 700, 490),
            "lemon": BBox(950, 200, 1000, 250),
            "hand": BBox(1080, 500, 1210, 640),
        },
        {
            "apple": BBox(180, 520, 245, 585),
            "orange": BBox(540, 500, 600, 560),
            "lemon": BBox(760, 180, 810, 230),
            "green apple": BBox(330, 300, 395, 365),
            "hand": BBox(60, 100, 190, 240),
        },
        {
            "apple": BBox(450, 330, 515, 395),
            "orange": BBox(880, 520, 940, 580),
            "lemon": BBox(700, 150, 750, 200),
            "pear": BBox(260, 560, 320, 630),
            "hand": BBox(1050, 100, 1180, 240),
        },
    ]
    return Scene(
        objects=layouts[variant % len(layouts)],
        effector=(640.0, 120.0),
        seed=seed,
        noise=NoiseModel(actuation_sigma=0.5, perception_sigma=1.0),
    )


COMMANDS = [
    ("grab the apple", {"held": "apple"}),
    ("pick up the lemon", {"held": "lemon"}),
    ("hand me the lemon", {"all": [{"held": None}, {"near_object": ["lemon", "hand", 90]}]}),
    ("move the apple to the right of the orange", {"relation": ["right_of", "apple", "orange"]}),
    ("move the orange to the left of the apple", {"relation": ["left_of", "orange", "apple"]}),
    ("move the lemon below the orange", {"relation": ["below", "lemon", "orange"]}),
    ("move the orange above the lemon", {"relation": ["above", "orange", "lemon"]}),
    ("place the orange at 400, 600", {"near_point": ["orange", [400, 600], 12]}),
    ("hand over the apple", {"all": [{"held": None}, {"near_object": ["apple", "hand", 90]}]}),
    ("grab the orange", {"held": "orange"}),
]


def build_script(
    n_trials: int = 60,
    seed: int = 7,
    faults: dict[str, int] | None = None,
) -> list[dict[str, Any]]:
    """Trial entries cycling through commands and scene variants.

    faults maps stage name -> how many trials get that stage's fault
    injected; assignments are disjoint (a trial carries at most one fault)
    and deterministic under the seed.
    """
    rng = np.random.default_rng(seed)
    entries = []
    for i in range(n_trials):
        utterance, predicate = COMMANDS[i % len(COMMANDS)]
        entries.append(
            {
                "id": f"trial-{i:03d}",
                "scene_file": f"scene_{i % 3}.json",
                "utterance": utterance,
                "expected_transcript": utterance,
                "expected_actions": actions_to_json(phrase_to_actions(utterance)),
                "expected_final": predicate,
                "seed": int(seed * 10_000 + i),
                "inject": [],
            }
        )
    if faults:
        total = sum(faults.values())
        if total > n_trials:
            raise ValueError(f"cannot inject {total} faults into {n_trials} trials")
        chosen = rng.permutation(n_trials)[:total]
        cursor = 0
        for stage, count in faults.items():
            for k in range(count):
                entries[int(chosen[cursor + k])]["inject"] = [stage]
            cursor += count
    return entries


def write_benchmark(directory: str | Path, entries: Iterable[dict[str, Any]],
                    script_name: str = SCRIPT_NAME) -> Path:
    """Write the script plus the three scene files it references."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for variant in range(3):
        save_scene(table_scene(variant), directory / f"scene_{variant}.json")
    script_path = directory / script_name
    with open(script_path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
    return script_path


def read_script(path: str | Path) -> list[dict[str, Any]]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                entries.append(json.loads(line))
    return entries


def bundled_script_path() -> Path:
    """Path of the packaged 60-trial script (scenes sit alongside it)."""
    return Path(resources.files(DATA_PACKAGE) / SCRIPT_NAME)
