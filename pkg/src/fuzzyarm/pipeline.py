"""End-to-end pipeline: transcribe, extract actions, detect, execute, account.

Stage timings are read from a clock owned by the adapter bundle. Mock
adapters drive a virtual clock by deterministic amounts, so scripted
benchmark runs replay byte-identically; external adapters run against the
monotonic wall clock. Timing starts at the wake moment (turn start) and the
overhead term is whatever turn time the four stages do not account for.
"""

from __future__ import annotations

import logging
import re
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Mapping, Protocol

import numpy as np

from .actions import ExecutionResult, PrimitiveExecutor
from .fuzzy import IT2FuzzySystem, servo_system
from .grammar import (
    ActionCall,
    CommandRegistry,
    ParseError,
    ValidationError,
    actions_from_json,
    default_registry,
    format_actions,
    parse_actions,
    referenced_labels,
    validate,
)
from .metrics import StageMetrics, TrialRecord
from .perception import ObjectPositionMap, SceneDetector, bbox_iou, query_objects
from .scene import Scene, evaluate_predicate, load_scene
from .servo import ServoConfig

log = logging.getLogger(__name__)

DECOY_LABEL = "unknown_object"


class MonotonicClock:
    def now(self) -> float:
        return time.monotonic()

    def advance(self, seconds: float) -> None:
        # Wall time advances itself.
        pass


class VirtualClock:
    """Deterministic clock the mock adapters advance explicitly."""

    def __init__(self, start: float = 0.0):
        self._t = start

    def now(self) -> float:
        return self._t

    def advance(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("clock cannot run backwards")
        self._t += seconds


@dataclass
class TrialContext:
    trial_id: str
    utterance: str
    expected_transcript: str | None = None
    expected_actions: list[ActionCall] | None = None
    expected_final: Mapping[str, Any] | None = None
    inject: frozenset[str] = frozenset()
    seed: int = 0
    utterance_audio: np.ndarray | None = None

    def fault(self, stage: str) -> bool:
        return stage in self.inject

    @classmethod
    def from_entry(cls, entry: Mapping[str, Any]) -> "TrialContext":
        expected_actions = None
        if entry.get("expected_actions") is not None:
            expected_actions = actions_from_json(entry["expected_actions"])
        return cls(
            trial_id=str(entry.get("id", "turn")),
            utterance=entry["utterance"],
            expected_transcript=entry.get("expected_transcript"),
            expected_actions=expected_actions,
            expected_final=entry.get("expected_final"),
            inject=frozenset(entry.get("inject", ())),
            seed=int(entry.get("seed", 0)),
        )


# ---------------------------------------------------------------------------
# Adapters


class Transcriber(Protocol):
    def transcribe(self, ctx: TrialContext) -> str: ...


class ActionExtractor(Protocol):
    def extract(self, ctx: TrialContext, text: str) -> str: ...


PHRASE_RULES: list[tuple[re.Pattern, Callable[[re.Match], list[ActionCall]]]] = [
    (
        re.compile(r"^(?:please )?(?:grab|pick up|pick|take) (?:the )?(.+)$"),
        lambda m: [ActionCall("pick_up", (m.group(1),))],
    ),
    (
        re.compile(r"^(?:hand (?:me|over)|give me|pass me) (?:the )?(.+)$"),
        lambda m: [ActionCall("pick_up", (m.group(1),)), ActionCall("hand_over", (m.group(1),))],
    ),
    (
        re.compile(r"^move (?:the )?(.+?) to the left of (?:the )?(.+)$"),
        lambda m: [ActionCall("move_object_to_left_of", (m.group(1), m.group(2)))],
    ),
    (
        re.compile(r"^move (?:the )?(.+?) to the right of (?:the )?(.+)$"),
        lambda m: [ActionCall("move_object_to_right_of", (m.group(1), m.group(2)))],
    ),
    (
        re.compile(r"^move (?:the )?(.+?) above (?:the )?(.+)$"),
        lambda m: [ActionCall("move_object_above", (m.group(1), m.group(2)))],
    ),
    (
        re.compile(r"^move (?:the )?(.+?) below (?:the )?(.+)$"),
        lambda m: [ActionCall("move_object_below", (m.group(1), m.group(2)))],
    ),
    (
        re.compile(r"^place (?:the )?(.+?) at (-?\d+(?:\.\d+)?)[, ]+(-?\d+(?:\.\d+)?)$"),
        lambda m: [ActionCall("place_at", (m.group(1), m.group(2), m.group(3)))],
    ),
]


def normalize_transcript(text: str) -> str:
    return re.sub(r"\s+", " ", re.sub(r"[.,!?;:]", "", text)).strip().lower()


def phrase_to_actions(text: str) -> list[ActionCall]:
    """Deterministic utterance -> action mapping used by the mock extractor."""
    cleaned = normalize_transcript(text)
    for pattern, build in PHRASE_RULES:
        m = pattern.match(cleaned)
        if m:
            return build(m)
    return []


class MockTranscriber:
    """Scripted speech-to-text: echoes the trial utterance, faults garble it."""

    def __init__(self, clock, latency: float = 0.6):
        self.clock = clock
        self.latency = latency

    def transcribe(self, ctx: TrialContext) -> str:
        self.clock.advance(self.latency)
        if ctx.fault("stt"):
            return ctx.utterance + " something something"
        return ctx.utterance


class MockActionExtractor:
    """Phrase-table language adapter; faults swap in a decoy object label."""

    def __init__(self, clock, latency: float = 0.5):
        self.clock = clock
        self.latency = latency

    def extract(self, ctx: TrialContext, text: str) -> str:
        self.clock.advance(self.latency)
        if text.lstrip().startswith("["):
            return text  # pre-formed action text passes straight through
        calls = phrase_to_actions(text)
        if ctx.fault("ae"):
            if calls:
                bad = [
                    ActionCall(calls[0].method_name, (DECOY_LABEL,) + calls[0].args[1:])
                ] + calls[1:]
            else:
                bad = [ActionCall("pick_up", (DECOY_LABEL,))]
            return format_actions(bad)
        return format_actions(calls)


class ExternalTranscriber:
    """HTTP speech-to-text client (not exercised by the acceptance suite)."""

    def __init__(self, url: str, timeout: float = 60.0):
        self.url = url
        self.timeout = timeout

    def transcribe(self, ctx: TrialContext) -> str:
        import requests

        payload: dict[str, Any] = {"sample_rate": 16000}
        if ctx.utterance_audio is not None:
            payload["samples"] = ctx.utterance_audio.tolist()
        else:
            payload["text_hint"] = ctx.utterance
        resp = requests.post(self.url, json=payload, timeout=self.timeout)
        resp.raise_for_status()
        return resp.json()["text"]


class ExternalActionExtractor:
    """HTTP language-model client; requests deterministic decoding."""

    def __init__(self, url: str, timeout: float = 60.0):
        self.url = url
        self.timeout = timeout

    def extract(self, ctx: TrialContext, text: str) -> str:
        import requests

        resp = requests.post(
            self.url, json={"text": text, "temperature": 0}, timeout=self.timeout
        )
        resp.raise_for_status()
        return resp.json()["actions"]


class ClockedDetector:
    """Wraps a detector, advancing the virtual clock per label query."""

    def __init__(self, inner, clock, latency_per_label: float = 0.0):
        self.inner = inner
        self.clock = clock
        self.latency_per_label = latency_per_label

    def detect(self, label: str):
        self.clock.advance(self.latency_per_label)
        return self.inner.detect(label)


class NullDetector:
    """Detector that finds nothing; used for injected detection faults."""

    def detect(self, label: str):
        return None


@dataclass
class Adapters:
    transcriber: Transcriber
    extractor: ActionExtractor
    registry: CommandRegistry
    system: IT2FuzzySystem
    servo_cfg: ServoConfig
    clock: Any
    make_detector: Callable[[Scene, TrialContext], Any]
    pose_sigma: float = 0.0
    margin: float = 10.0
    seconds_per_motion_step: float = 0.0
    turn_overhead_seconds: float = 0.0
    events: Callable[[dict], None] | None = None

    def emit(self, event: dict) -> None:
        if self.events is not None:
            self.events(event)


def mock_adapters(
    events: Callable[[dict], None] | None = None,
    detection_sigma: float = 1.0,
    pose_sigma: float = 1.0,
    clock: VirtualClock | None = None,
) -> Adapters:
    """Deterministic all-mock bundle driving a virtual clock."""
    clock = clock or VirtualClock()

    def make_detector(scene: Scene, ctx: TrialContext):
        if ctx.fault("od"):
            inner = NullDetector()
        else:
            inner = SceneDetector(
                scene, noise_sigma=detection_sigma, rng=np.random.default_rng(ctx.seed + 1)
            )
        return ClockedDetector(inner, clock, latency_per_label=0.9)

    return Adapters(
        transcriber=MockTranscriber(clock),
        extractor=MockActionExtractor(clock),
        registry=default_registry(),
        system=servo_system(),
        servo_cfg=ServoConfig(max_iters=400),
        clock=clock,
        make_detector=make_detector,
        pose_sigma=pose_sigma,
        margin=10.0,
        seconds_per_motion_step=0.03,
        turn_overhead_seconds=0.2,
        events=events,
    )


def external_adapters(
    stt_url: str,
    llm_url: str,
    detect_url: str,
    events: Callable[[dict], None] | None = None,
) -> Adapters:
    from .perception import HTTPDetector

    clock = MonotonicClock()
    return Adapters(
        transcriber=ExternalTranscriber(stt_url),
        extractor=ExternalActionExtractor(llm_url),
        registry=default_registry(),
        system=servo_system(),
        servo_cfg=ServoConfig(max_iters=400),
        clock=clock,
        make_detector=lambda scene, ctx: HTTPDetector(detect_url),
        events=events,
    )


# ---------------------------------------------------------------------------
# Turn execution


@dataclass
class TurnOutcome:
    record: TrialRecord
    transcript: str
    actions: list[ActionCall]
    action_error: str | None
    objects: ObjectPositionMap
    execution: list[tuple[ActionCall, ExecutionResult]]


def load_trial_scene(entry: Mapping[str, Any], base_dir: str | Path) -> Scene:
    """Scene for one scripted trial, reseeded with the trial's own seed."""
    scene = load_scene(Path(base_dir) / entry["scene_file"])
    seed = int(entry.get("seed", scene.seed))
    scene.seed = seed
    scene.rng = np.random.default_rng(seed)
    return scene


def run_turn(entry: Mapping[str, Any], adapters: Adapters, scene: Scene) -> TurnOutcome:
    """Execute the full stage sequence for one trial/turn."""
    ctx = TrialContext.from_entry(entry)
    clock = adapters.clock
    t0 = clock.now()
    adapters.emit({"type": "turn", "status": "started", "trial_id": ctx.trial_id})
    clock.advance(adapters.turn_overhead_seconds)

    # Speech-to-text.
    adapters.emit({"type": "stage", "stage": "stt", "status": "running"})
    mark = clock.now()
    transcript = adapters.transcriber.transcribe(ctx)
    t_stt = clock.now() - mark
    if ctx.expected_transcript is None:
        a_stt = 100
    else:
        a_stt = 100 if normalize_transcript(transcript) == normalize_transcript(
            ctx.expected_transcript
        ) else 0
    adapters.emit(
        {"type": "stage", "stage": "stt", "status": "ok" if a_stt else "failed", "duration": t_stt}
    )

    # Action extraction.
    adapters.emit({"type": "stage", "stage": "ae", "status": "running"})
    mark = clock.now()
    action_error: str | None = None
    actions: list[ActionCall] = []
    try:
        action_text = adapters.extractor.extract(ctx, transcript)
        actions = list(validate(parse_actions(action_text), adapters.registry))
    except (ParseError, ValidationError) as exc:
        action_error = str(exc)
        actions = []
    t_ae = clock.now() - mark
    if action_error is not None:
        a_ae = 0
    elif ctx.expected_actions is None:
        a_ae = 100
    else:
        a_ae = 100 if actions == ctx.expected_actions else 0
    adapters.emit(
        {"type": "stage", "stage": "ae", "status": "ok" if a_ae else "failed", "duration": t_ae}
    )

    # Object detection: one query per referenced label.
    adapters.emit({"type": "stage", "stage": "od", "status": "running"})
    mark = clock.now()
    labels = referenced_labels(actions, adapters.registry)
    detector = adapters.make_detector(scene, ctx)
    objects = query_objects(labels, detector) if labels else ObjectPositionMap()
    t_od = clock.now() - mark
    a_od = 100
    for label in labels:
        truth = scene.objects.get(label)
        found = objects.get(label)
        if truth is None or found is None or bbox_iou(found, truth) < 0.5:
            a_od = 0
            break
    for label, box in objects.items():
        adapters.emit({"type": "detection", "label": label, "box": list(box.as_tuple())})
    adapters.emit(
        {"type": "stage", "stage": "od", "status": "ok" if a_od else "failed", "duration": t_od}
    )

    # Robot actions.
    adapters.emit({"type": "stage", "stage": "ra", "status": "running"})
    mark = clock.now()

    def on_step(iteration: int, pose: tuple[float, float]) -> None:
        clock.advance(adapters.seconds_per_motion_step)
        adapters.emit(
            {"type": "trajectory", "iteration": iteration, "x": pose[0], "y": pose[1]}
        )

    servo_cfg = adapters.servo_cfg
    if ctx.fault("ra"):
        # Motion sabotage: the arm stalls after a couple of steps, so no
        # goal that starts unsatisfied can be reached.
        servo_cfg = replace(servo_cfg, max_iters=2)
    executor = PrimitiveExecutor(
        scene,
        adapters.system,
        servo_cfg,
        margin=adapters.margin,
        pose_sigma=adapters.pose_sigma,
        pose_rng=np.random.default_rng(ctx.seed + 2),
        on_step=on_step,
    )
    execution: list[tuple[ActionCall, ExecutionResult]] = []
    for call in actions:
        result = executor.execute(call, objects)
        execution.append((call, result))
        adapters.emit({"type": "scene", "snapshot": scene.snapshot()})
        if not result.success:
            log.info("trial %s: %s failed: %s", ctx.trial_id, call.method_name, result.reason)
    t_ra = clock.now() - mark
    if ctx.expected_final is not None:
        a_ra = 100 if evaluate_predicate(ctx.expected_final, scene) else 0
    else:
        a_ra = 100 if all(result.success for _, result in execution) else 0
    adapters.emit(
        {"type": "stage", "stage": "ra", "status": "ok" if a_ra else "failed", "duration": t_ra}
    )

    # A failed stage poisons everything downstream.
    accuracies = [a_stt, a_ae, a_od, a_ra]
    for i in range(1, 4):
        if accuracies[i - 1] == 0:
            accuracies[i] = 0
    a_stt, a_ae, a_od, a_ra = accuracies

    stages = StageMetrics(
        t_stt=t_stt, t_ae=t_ae, t_od=t_od, t_ra=t_ra,
        a_stt=a_stt, a_ae=a_ae, a_od=a_od, a_ra=a_ra,
    )
    overhead = (clock.now() - t0) - (((t_stt + t_ae) + t_od) + t_ra)
    record = TrialRecord.build(
        trial_id=ctx.trial_id,
        utterance=ctx.utterance,
        expected_actions=entry.get("expected_actions") or [],
        stages=stages,
        overhead=overhead,
    )
    adapters.emit(
        {"type": "turn", "status": "finished", "trial_id": ctx.trial_id,
         "record": record.to_dict()}
    )
    return TurnOutcome(
        record=record,
        transcript=transcript,
        actions=actions,
        action_error=action_error,
        objects=objects,
        execution=execution,
    )


def run_trial(entry: Mapping[str, Any], adapters: Adapters, scene: Scene) -> TrialRecord:
    return run_turn(entry, adapters, scene).record
