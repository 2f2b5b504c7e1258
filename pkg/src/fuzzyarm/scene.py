"""Deterministic planar world: labeled boxes on a table, an effector, pick/hold.

Coordinates are screen pixels (y grows downward, so "above" means smaller y).
All randomness flows through the scene's seeded generator, so scripted trials
replay bit-identically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .perception import BBox, bbox_center

DEFAULT_FRAME = (1280, 720)

RELATIONS = ("left_of", "right_of", "above", "below")


@dataclass(frozen=True)
class NoiseModel:
    actuation_sigma: float = 0.5
    perception_sigma: float = 1.0

    def __post_init__(self) -> None:
        if self.actuation_sigma < 0 or self.perception_sigma < 0:
            raise ValueError("noise sigmas must be nonnegative")


class Scene:
    """Mutable world state; mutate only through apply_move / pick / release."""

    def __init__(
        self,
        objects: Mapping[str, BBox],
        effector: tuple[float, float],
        frame: tuple[int, int] = DEFAULT_FRAME,
        held: str | None = None,
        seed: int = 0,
        noise: NoiseModel = NoiseModel(),
    ):
        self.frame = (int(frame[0]), int(frame[1]))
        self.objects: dict[str, BBox] = dict(objects)
        self.effector = (float(effector[0]), float(effector[1]))
        self.held = held
        self.seed = int(seed)
        self.noise = noise
        self.rng = np.random.default_rng(self.seed)
        self._validate()

    def _validate(self) -> None:
        w, h = self.frame
        ex, ey = self.effector
        if not (0 <= ex <= w and 0 <= ey <= h):
            raise ValueError(f"effector {self.effector} outside frame {self.frame}")
        for label, box in self.objects.items():
            if not label:
                raise ValueError("object labels must be non-empty")
            if box.x_min < 0 or box.y_min < 0 or box.x_max > w or box.y_max > h:
                raise ValueError(f"object {label!r} box {box.as_tuple()} outside frame")
        if self.held is not None and self.held not in self.objects:
            raise ValueError(f"held label {self.held!r} not among objects")

    def snapshot(self) -> dict[str, Any]:
        """Read-only JSON-friendly view for the gateway and UI."""
        return {
            "frame": list(self.frame),
            "objects": {label: list(box.as_tuple()) for label, box in self.objects.items()},
            "effector": list(self.effector),
            "held": self.held,
        }

    def pick(self, label: str) -> None:
        if self.held is not None:
            raise ValueError("gripper occupied")
        if label not in self.objects:
            raise KeyError(label)
        self.held = label

    def release(self) -> None:
        self.held = None


def apply_move(scene: Scene, dx: float, dy: float) -> Scene:
    """Translate the effector by (dx, dy) plus actuation noise, clamped to frame.

    A held object moves rigidly with the effector: one shared delta, clamped
    so both the effector and the held box stay inside the frame.
    """
    if not (math.isfinite(dx) and math.isfinite(dy)):
        raise ValueError(f"non-finite move ({dx}, {dy})")
    sigma = scene.noise.actuation_sigma
    if sigma > 0:
        nx, ny = scene.rng.normal(0.0, sigma, 2)
        dx, dy = dx + float(nx), dy + float(ny)

    w, h = scene.frame
    ex, ey = scene.effector
    lo_dx, hi_dx = -ex, w - ex
    lo_dy, hi_dy = -ey, h - ey
    if scene.held is not None:
        box = scene.objects[scene.held]
        lo_dx = max(lo_dx, -box.x_min)
        hi_dx = min(hi_dx, w - box.x_max)
        lo_dy = max(lo_dy, -box.y_min)
        hi_dy = min(hi_dy, h - box.y_max)
    dx = min(max(dx, lo_dx), hi_dx)
    dy = min(max(dy, lo_dy), hi_dy)

    scene.effector = (ex + dx, ey + dy)
    if scene.held is not None:
        scene.objects[scene.held] = scene.objects[scene.held].translated(dx, dy)
    return scene


def resolve_spatial_goal(
    relation: str,
    reference: BBox,
    moving: BBox,
    margin: float = 10.0,
    frame: tuple[int, int] | None = None,
) -> tuple[tuple[float, float], bool]:
    """Target center for placing `moving` in `relation` to `reference`.

    Returns ((x, y), clipped); the goal is clamped into the frame (and the
    clipped flag set) when the ideal point falls outside it.
    """
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    cx, cy = bbox_center(reference)
    if relation == "left_of":
        x, y = reference.x_min - margin - moving.width / 2.0, cy
    elif relation == "right_of":
        x, y = reference.x_max + margin + moving.width / 2.0, cy
    elif relation == "above":
        x, y = cx, reference.y_min - margin - moving.height / 2.0
    else:  # below
        x, y = cx, reference.y_max + margin + moving.height / 2.0

    clipped = False
    if frame is not None:
        w, h = frame
        half_w, half_h = moving.width / 2.0, moving.height / 2.0
        gx = min(max(x, half_w), w - half_w)
        gy = min(max(y, half_h), h - half_h)
        clipped = (gx, gy) != (x, y)
        x, y = gx, gy
    return (x, y), clipped


# ---------------------------------------------------------------------------
# Scene files


def scene_from_dict(data: Mapping[str, Any]) -> Scene:
    objects = {
        entry["label"]: BBox(*map(float, entry["box"])) for entry in data.get("objects", [])
    }
    noise_cfg = data.get("noise", {})
    noise = NoiseModel(
        actuation_sigma=float(noise_cfg.get("actuation_sigma", 0.5)),
        perception_sigma=float(noise_cfg.get("perception_sigma", 1.0)),
    )
    return Scene(
        objects=objects,
        effector=tuple(data["effector"]),
        frame=tuple(data.get("frame", DEFAULT_FRAME)),
        held=data.get("held"),
        seed=int(data.get("seed", 0)),
        noise=noise,
    )


def scene_to_dict(scene: Scene) -> dict[str, Any]:
    return {
        "frame": list(scene.frame),
        "objects": [
            {"label": label, "box": list(box.as_tuple())} for label, box in scene.objects.items()
        ],
        "effector": list(scene.effector),
        "held": scene.held,
        "seed": scene.seed,
        "noise": {
            "actuation_sigma": scene.noise.actuation_sigma,
            "perception_sigma": scene.noise.perception_sigma,
        },
    }


def load_scene(path: str | Path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return scene_from_dict(json.load(fh))


def save_scene(scene: Scene, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene_to_dict(scene), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Final-scene predicates for scripted trials


def evaluate_predicate(spec: Mapping[str, Any] | None, scene: Scene) -> bool:
    """Declarative checks over a scene.

    Forms: {"held": label-or-null}, {"relation": [rel, a, b]},
    {"near_point": [label, [x, y], tol]}, {"near_object": [a, b, tol]},
    {"effector_near": [[x, y], tol]}, {"all": [spec, ...]}.
    """
    if spec is None:
        return True
    if "all" in spec:
        return all(evaluate_predicate(s, scene) for s in spec["all"])
    if "held" in spec:
        return scene.held == spec["held"]
    if "relation" in spec:
        rel, a, b = spec["relation"]
        if a not in scene.objects or b not in scene.objects:
            return False
        box_a, box_b = scene.objects[a], scene.objects[b]
        if rel == "left_of":
            return box_a.x_max < box_b.x_min
        if rel == "right_of":
            return box_a.x_min > box_b.x_max
        if rel == "above":
            return box_a.y_max < box_b.y_min
        if rel == "below":
            return box_a.y_min > box_b.y_max
        raise ValueError(f"unknown relation {rel!r}")
    if "near_point" in spec:
        label, point, tol = spec["near_point"]
        if label not in scene.objects:
            return False
        cx, cy = bbox_center(scene.objects[label])
        return math.hypot(cx - point[0], cy - point[1]) <= tol
    if "near_object" in spec:
        a, b, tol = spec["near_object"]
        if a not in scene.objects or b not in scene.objects:
            return False
        ax, ay = bbox_center(scene.objects[a])
        bx, by = bbox_center(scene.objects[b])
        return math.hypot(ax - bx, ay - by) <= tol
    if "effector_near" in spec:
        point, tol = spec["effector_near"]
        ex, ey = scene.effector
        return math.hypot(ex - point[0], ey - point[1]) <= tol
    raise ValueError(f"unrecognized predicate {dict(spec)!r}")
