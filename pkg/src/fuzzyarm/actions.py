"""Execution of validated action calls against the simulated scene.

Every primitive decomposes into servo motions driven by the detected object
positions (not ground truth): pick_up approaches the detected box center,
relation moves re-place a held object at a goal resolved from detected
boxes. While an object is held, the servo controls the object's center
rather than the bare effector, so placement accuracy matches the dead zone
regardless of where the suction grabbed it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fuzzy import IT2FuzzySystem
from .grammar import ActionCall
from .perception import ObjectPositionMap, bbox_center
from .scene import RELATIONS, Scene, resolve_spatial_goal
from .servo import ServoConfig, ServoOutcome, servo_to

log = logging.getLogger(__name__)

RELATION_BY_METHOD = {
    "move_object_to_left_of": "left_of",
    "move_object_to_right_of": "right_of",
    "move_object_above": "above",
    "move_object_below": "below",
}

REASON_NOT_DETECTED = "object not detected"
REASON_GRIPPER_OCCUPIED = "gripper occupied"


@dataclass
class ExecutionResult:
    success: bool
    reason: str | None = None
    servo_outcomes: list[ServoOutcome] = field(default_factory=list)


class PrimitiveExecutor:
    """Dispatches validated calls onto scene motions.

    pose_sigma adds zero-mean Gaussian noise to the controlled point the
    servo reads (perception noise); actuation noise lives in the scene.
    """

    def __init__(
        self,
        scene: Scene,
        system: IT2FuzzySystem,
        cfg: ServoConfig,
        margin: float = 10.0,
        pose_sigma: float = 0.0,
        pose_rng: np.random.Generator | None = None,
        on_step: Callable[[int, tuple[float, float]], None] | None = None,
    ):
        self.scene = scene
        self.system = system
        self.cfg = cfg
        self.margin = margin
        self.pose_sigma = pose_sigma
        self.pose_rng = pose_rng or np.random.default_rng(0)
        self.on_step = on_step

    def _noisy(self, point: tuple[float, float]) -> tuple[float, float]:
        if self.pose_sigma <= 0:
            return point
        jx, jy = self.pose_rng.normal(0.0, self.pose_sigma, 2)
        return (point[0] + float(jx), point[1] + float(jy))

    def _effector_pose(self) -> tuple[float, float]:
        return self._noisy(self.scene.effector)

    def _held_pose(self) -> tuple[float, float]:
        held = self.scene.held
        assert held is not None
        return self._noisy(bbox_center(self.scene.objects[held]))

    def _servo(self, target: tuple[float, float], controlled: str) -> ServoOutcome:
        pose = self._held_pose if controlled == "held" else self._effector_pose
        return servo_to(target, self.scene, self.system, self.cfg,
                        pose_source=pose, on_step=self.on_step)

    def execute(self, call: ActionCall, objects: ObjectPositionMap) -> ExecutionResult:
        name = call.method_name
        if name == "pick_up":
            return self._pick_up(call.args[0], objects)
        if name == "hand_over":
            return self._hand_over(call.args[0], objects)
        if name in RELATION_BY_METHOD:
            return self._relation_move(RELATION_BY_METHOD[name], call.args[0], call.args[1], objects)
        if name == "place_at":
            return self._place_at(call.args[0], call.args[1], call.args[2], objects)
        return ExecutionResult(False, f"no executor for method {name!r}")

    def _pick_up(self, label: str, objects: ObjectPositionMap) -> ExecutionResult:
        if self.scene.held is not None:
            return ExecutionResult(False, REASON_GRIPPER_OCCUPIED)
        if label not in objects:
            return ExecutionResult(False, REASON_NOT_DETECTED)
        outcome = self._servo(bbox_center(objects[label]), controlled="effector")
        if not outcome.converged:
            return ExecutionResult(False, "servo did not converge", [outcome])
        self.scene.pick(label)
        return ExecutionResult(True, None, [outcome])

    def _hand_over(self, label: str, objects: ObjectPositionMap) -> ExecutionResult:
        if "hand" not in objects:
            return ExecutionResult(False, REASON_NOT_DETECTED)
        if self.scene.held != label:
            return ExecutionResult(False, f"not holding {label!r}")
        outcome = self._servo(bbox_center(objects["hand"]), controlled="held")
        self.scene.release()
        if not outcome.converged:
            return ExecutionResult(False, "servo did not converge", [outcome])
        return ExecutionResult(True, None, [outcome])

    def _relation_move(
        self, relation: str, moving: str, reference: str, objects: ObjectPositionMap
    ) -> ExecutionResult:
        assert relation in RELATIONS
        if moving == reference:
            return ExecutionResult(False, "cannot relate an object to itself")
        if moving not in objects or reference not in objects:
            return ExecutionResult(False, REASON_NOT_DETECTED)
        outcomes: list[ServoOutcome] = []
        if self.scene.held != moving:
            picked = self._pick_up(moving, objects)
            outcomes.extend(picked.servo_outcomes)
            if not picked.success:
                return ExecutionResult(False, picked.reason, outcomes)
        goal, clipped = resolve_spatial_goal(
            relation, objects[reference], objects[moving], self.margin, frame=self.scene.frame
        )
        if clipped:
            log.warning("goal clipped to frame for %s(%s, %s)", relation, moving, reference)
        outcome = self._servo(goal, controlled="held")
        outcomes.append(outcome)
        self.scene.release()
        if not outcome.converged:
            return ExecutionResult(False, "servo did not converge", outcomes)
        return ExecutionResult(True, None, outcomes)

    def _place_at(self, label: str, x: str, y: str, objects: ObjectPositionMap) -> ExecutionResult:
        try:
            goal = (float(x), float(y))
        except ValueError:
            return ExecutionResult(False, f"invalid coordinates ({x!r}, {y!r})")
        outcomes: list[ServoOutcome] = []
        if self.scene.held != label:
            picked = self._pick_up(label, objects)
            outcomes.extend(picked.servo_outcomes)
            if not picked.success:
                return ExecutionResult(False, picked.reason, outcomes)
        outcome = self._servo(goal, controlled="held")
        outcomes.append(outcome)
        self.scene.release()
        if not outcome.converged:
            return ExecutionResult(False, "servo did not converge", outcomes)
        return ExecutionResult(True, None, outcomes)


def execute_primitive(
    scene: Scene,
    call: ActionCall,
    objects: ObjectPositionMap,
    system: IT2FuzzySystem,
    cfg: ServoConfig,
    **kwargs,
) -> tuple[Scene, ExecutionResult]:
    """One-shot convenience wrapper around PrimitiveExecutor."""
    executor = PrimitiveExecutor(scene, system, cfg, **kwargs)
    return scene, executor.execute(call, objects)
