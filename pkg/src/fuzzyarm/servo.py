"""Closed-loop positional servoing through the fuzzy engine.

Each axis of the pixel error runs independently through a single-axis fuzzy
controller; the crisp correction is scaled by a distance-dependent gain and
clamped to a per-step limit. A dead zone around zero suppresses
micro-corrections entirely.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .fuzzy import IT2FuzzySystem, evaluate
from .scene import Scene, apply_move


@dataclass(frozen=True)
class ServoConfig:
    dead_zone: float = 5.0  # pixels
    gain_near: float = 0.3
    gain_far: float = 1.0
    gain_knee: float = 60.0  # pixels
    max_iters: int = 200
    step_clamp: float = 25.0  # pixels per step

    def __post_init__(self) -> None:
        if self.dead_zone < 0:
            raise ValueError("dead zone must be nonnegative")
        if self.gain_near <= 0 or self.gain_far <= 0 or self.gain_knee <= 0:
            raise ValueError("gains and knee must be positive")
        if self.gain_near > self.gain_far:
            raise ValueError("gain_near must not exceed gain_far")
        if self.dead_zone >= self.gain_knee:
            raise ValueError("dead zone must sit below the gain knee")
        if self.max_iters <= 0 or self.step_clamp <= 0:
            raise ValueError("max_iters and step_clamp must be positive")


@dataclass
class ServoOutcome:
    converged: bool
    iterations: int
    trajectory: list[tuple[float, float]]
    final_error: float


def distance_gain(distance: float, cfg: ServoConfig) -> float:
    """Smoothly interpolates gain_near -> gain_far, saturating at the knee."""
    frac = min(1.0, distance / cfg.gain_knee)
    return cfg.gain_near + (cfg.gain_far - cfg.gain_near) * frac


def compute_step(
    error_x: float, error_y: float, system: IT2FuzzySystem, cfg: ServoConfig
) -> tuple[float, float]:
    """Corrective step for one control tick; exactly (0, 0) inside the dead zone."""
    if not (math.isfinite(error_x) and math.isfinite(error_y)):
        raise ValueError(f"non-finite error ({error_x}, {error_y})")
    distance = math.hypot(error_x, error_y)
    if distance <= cfg.dead_zone:
        return (0.0, 0.0)
    in_name = system.inputs[0].name
    out_name = system.outputs[0].name
    gain = distance_gain(distance, cfg)
    steps = []
    for err in (error_x, error_y):
        if err == 0.0:
            # A quiescent axis needs no correction; skipping the evaluation
            # keeps it free of defuzzification round-off.
            steps.append(0.0)
            continue
        raw = evaluate({in_name: err}, system)[out_name]
        steps.append(min(max(raw * gain, -cfg.step_clamp), cfg.step_clamp))
    return (steps[0], steps[1])


def servo_to(
    target: tuple[float, float],
    scene: Scene,
    system: IT2FuzzySystem,
    cfg: ServoConfig,
    pose_source: Callable[[], tuple[float, float]] | None = None,
    on_step: Callable[[int, tuple[float, float]], None] | None = None,
) -> ServoOutcome:
    """Drive the effector until the measured error enters the dead zone.

    pose_source supplies the controlled point (defaults to ground-truth
    effector; pass a noisy provider to simulate perception error). Running
    out of iterations yields a non-converged outcome, not an exception.
    """
    read_pose = pose_source or (lambda: scene.effector)
    trajectory = [scene.effector]
    if on_step is not None:
        on_step(0, scene.effector)
    for iteration in range(cfg.max_iters + 1):
        px, py = read_pose()
        ex, ey = px - target[0], py - target[1]
        error = math.hypot(ex, ey)
        if error <= cfg.dead_zone:
            return ServoOutcome(True, iteration, trajectory, error)
        if iteration == cfg.max_iters:
            return ServoOutcome(False, iteration, trajectory, error)
        dx, dy = compute_step(ex, ey, system, cfg)
        apply_move(scene, dx, dy)
        trajectory.append(scene.effector)
        if on_step is not None:
            on_step(iteration + 1, scene.effector)
    raise AssertionError("unreachable")


def trajectory_records(outcome: ServoOutcome, target: tuple[float, float]) -> list[dict]:
    """Per-iteration records (iteration, pose, error, step) for export."""
    records = []
    for i, pose in enumerate(outcome.trajectory):
        err = math.hypot(pose[0] - target[0], pose[1] - target[1])
        if i + 1 < len(outcome.trajectory):
            nxt = outcome.trajectory[i + 1]
            step = [nxt[0] - pose[0], nxt[1] - pose[1]]
        else:
            step = [0.0, 0.0]
        records.append({"iteration": i, "pose": list(pose), "error": err, "step": step})
    return records


def export_trajectory(outcome: ServoOutcome, target: tuple[float, float], path: str | Path) -> None:
    """Line-delimited JSON trajectory dump for plotting and the UI stream."""
    with open(path, "w", encoding="utf-8") as fh:
        for record in trajectory_records(outcome, target):
            fh.write(json.dumps(record) + "\n")
