"""Object localization facade and end-effector pose providers.

Detectors answer one open-vocabulary label at a time (the upstream vision
model cannot batch open-vocabulary prompts), and results merge into an
object position map keyed by label. The mock detector reads simulator
ground truth plus seeded noise; an HTTP client covers a real service.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np

log = logging.getLogger(__name__)

DETECTION_TASK_TAG = "<OPEN_VOCABULARY_DETECTION>"
POSE_STALENESS_LIMIT = 0.5  # seconds


class DetectorError(RuntimeError):
    """A detection query failed (backend error, timeout, malformed reply)."""


class StalePoseError(RuntimeError):
    """The pose provider has not produced a fresh pose within the limit."""


@dataclass(frozen=True)
class BBox:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(
                f"degenerate box ({self.x_min}, {self.y_min}, {self.x_max}, {self.y_max})"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def translated(self, dx: float, dy: float) -> "BBox":
        return BBox(self.x_min + dx, self.y_min + dy, self.x_max + dx, self.y_max + dy)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)


def bbox_center(b: BBox) -> tuple[float, float]:
    return ((b.x_min + b.x_max) / 2.0, (b.y_min + b.y_max) / 2.0)


def bbox_iou(a: BBox, b: BBox) -> float:
    ix = max(0.0, min(a.x_max, b.x_max) - max(a.x_min, b.x_min))
    iy = max(0.0, min(a.y_max, b.y_max) - max(a.y_min, b.y_min))
    inter = ix * iy
    union = a.width * a.height + b.width * b.height - inter
    return inter / union if union > 0 else 0.0


class ObjectPositionMap(dict):
    """label -> BBox map; per-label query failures are recorded alongside."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.failures: dict[str, str] = {}


class Detector(Protocol):
    def detect(self, label: str) -> BBox | None:
        """Locate one label; None when not present. May raise DetectorError."""
        ...


def query_objects(labels: list[str], detector: Detector) -> ObjectPositionMap:
    """One detection query per label; merge results, record failures per label.

    Labels the detector cannot find are simply absent from the map, which
    lets callers distinguish "not present" from "query failed" (failures).
    """
    if not labels:
        raise ValueError("query_objects requires a non-empty label list")
    result = ObjectPositionMap()
    for label in labels:
        try:
            box = detector.detect(label)
        except Exception as exc:  # noqa: BLE001 - per-label isolation
            result.failures[label] = str(exc)
            log.warning("detection query failed for %r: %s", label, exc)
            continue
        if box is not None:
            result[label] = box
    return result


class SceneDetector:
    """Mock detector over simulator ground truth with seeded corner noise."""

    def __init__(self, scene, noise_sigma: float = 0.0, rng: np.random.Generator | None = None,
                 fail_labels: set[str] | None = None):
        self.scene = scene
        self.noise_sigma = noise_sigma
        self.rng = rng or np.random.default_rng(0)
        self.fail_labels = fail_labels or set()

    def detect(self, label: str) -> BBox | None:
        # A real query would send DETECTION_TASK_TAG + label; the mock only
        # needs the label itself.
        if label in self.fail_labels:
            return None
        box = self.scene.objects.get(label)
        if box is None:
            return None
        if self.noise_sigma <= 0:
            return box
        jx, jy = self.rng.normal(0.0, self.noise_sigma, 2)
        return box.translated(float(jx), float(jy))


class HTTPDetector:
    """Client for an external open-vocabulary detection service.

    POSTs {"frame": ..., "prompt": "<task tag> <label>"} and expects
    {"label": str, "box": [x_min, y_min, x_max, y_max]} or {"box": null}.
    Not exercised by the acceptance suite.
    """

    def __init__(self, url: str, frame_ref: str = "latest", timeout: float = 10.0):
        self.url = url
        self.frame_ref = frame_ref
        self.timeout = timeout

    def detect(self, label: str) -> BBox | None:
        import requests

        try:
            resp = requests.post(
                self.url,
                json={"frame": self.frame_ref, "prompt": f"{DETECTION_TASK_TAG} {label}"},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            payload = resp.json()
        except Exception as exc:
            raise DetectorError(f"detection service failed for {label!r}: {exc}") from exc
        box = payload.get("box")
        if box is None:
            return None
        return BBox(*map(float, box))


@dataclass(frozen=True)
class EffectorPose:
    position: tuple[float, float]
    timestamp: float
    source: str = "ground_truth_noisy"


class SimPoseProvider:
    """Pose from simulator ground truth plus zero-mean Gaussian noise.

    Stands in for the marker-based tracker (which reports at ~30 fps in the
    real system); timestamps are monotone per provider.
    """

    def __init__(self, scene, sigma: float = 1.0, rng: np.random.Generator | None = None,
                 clock: Callable[[], float] = time.monotonic):
        self.scene = scene
        self.sigma = sigma
        self.rng = rng or np.random.default_rng(0)
        self.clock = clock
        self._last_ts = -np.inf

    def latest(self) -> EffectorPose:
        x, y = self.scene.effector
        if self.sigma > 0:
            nx, ny = self.rng.normal(0.0, self.sigma, 2)
            x, y = x + float(nx), y + float(ny)
        w, h = self.scene.frame
        x = min(max(x, 0.0), float(w))
        y = min(max(y, 0.0), float(h))
        ts = max(self.clock(), self._last_ts)
        self._last_ts = ts
        return EffectorPose((x, y), ts)


def effector_pose(provider, now: float | None = None,
                  max_age: float = POSE_STALENESS_LIMIT) -> EffectorPose:
    """Most recent pose; raises StalePoseError beyond the staleness bound."""
    pose = provider.latest()
    current = time.monotonic() if now is None else now
    if current - pose.timestamp > max_age:
        raise StalePoseError(
            f"pose is {current - pose.timestamp:.2f}s old (limit {max_age}s); servo must pause"
        )
    return pose
