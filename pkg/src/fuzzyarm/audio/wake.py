"""Wake decision predicate, streaming detector, and silence end-pointing.

The wake predicate itself is tiny: the classifier's label must equal the
configured wake label AND its score must exceed the threshold (strictly).
Everything around it handles streaming: sliding windows, skip-on-error, and
the 5-second trailing-silence rule that ends an utterance.
"""

from __future__ import annotations

import logging
import math
import queue
import threading
from dataclasses import dataclass
from typing import Iterable, Protocol

import numpy as np

from .windowing import AudioWindow, ChunkConfig, as_sample_blocks, chunk_stream

log = logging.getLogger(__name__)

SILENCE_FRAME_SECONDS = 0.25
DEFAULT_AMP_THRESHOLD = 0.01  # RMS, full scale = 1.0


@dataclass(frozen=True)
class WakeConfig:
    wake_label: str = "marvin"
    threshold: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")


@dataclass(frozen=True)
class DetectionResult:
    label: str
    score: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must lie in [0, 1], got {self.score}")


class Classifier(Protocol):
    def classify(self, window: AudioWindow) -> DetectionResult: ...


def detect_wake(window: AudioWindow, classifier: Classifier, cfg: WakeConfig) -> bool:
    """True iff label matches AND score strictly exceeds the threshold."""
    result = classifier.classify(window)
    return result.label == cfg.wake_label and result.score > cfg.threshold


MARKER_FREQS = (1000.0, 1500.0)


class MarkerToneClassifier:
    """Deterministic mock keyed on an embedded two-tone marker burst.

    Scores a window by the fraction of its energy concentrated at the marker
    frequencies; stands in for the neural short-command classifier.
    """

    def __init__(self, wake_label: str = "marvin", sample_rate: int = 16000,
                 freqs: tuple[float, float] = MARKER_FREQS):
        self.wake_label = wake_label
        self.sample_rate = sample_rate
        self.freqs = freqs

    def classify(self, window: AudioWindow) -> DetectionResult:
        spectrum = np.abs(np.fft.rfft(window.samples)) ** 2
        total = spectrum.sum()
        if total <= 0.0:
            return DetectionResult("background", 0.0)
        bin_hz = self.sample_rate / len(window.samples)
        marker = 0.0
        for f in self.freqs:
            k = int(round(f / bin_hz))
            lo, hi = max(0, k - 2), min(len(spectrum) - 1, k + 2)
            marker += spectrum[lo : hi + 1].sum()
        score = float(min(1.0, marker / total))
        label = self.wake_label if score >= 0.3 else "background"
        return DetectionResult(label, score)


@dataclass(frozen=True)
class WakeEvent:
    window_index: int
    start_time: float
    result: DetectionResult


def scan_for_wake(
    stream,
    classifier: Classifier,
    wake_cfg: WakeConfig | None = None,
    chunk_cfg: ChunkConfig | None = None,
) -> WakeEvent | None:
    """Scan windows until the wake predicate fires; classifier errors skip
    the window with a logged warning."""
    wake_cfg = wake_cfg or WakeConfig()
    chunk_cfg = chunk_cfg or ChunkConfig()
    for index, window in enumerate(chunk_stream(stream, chunk_cfg)):
        try:
            result = classifier.classify(window)
        except Exception as exc:  # noqa: BLE001 - stream must keep flowing
            log.warning("classifier failed on window %d (t=%.2fs): %s", index, window.start_time, exc)
            continue
        if result.label == wake_cfg.wake_label and result.score > wake_cfg.threshold:
            return WakeEvent(index, window.start_time, result)
    return None


class WindowPipeline:
    """Producer/consumer stage pair joined by a bounded queue.

    When the consumer lags past the high-water mark the oldest pending
    window is dropped (and logged) rather than blocking the audio source.
    """

    def __init__(self, high_water: int = 32):
        self._queue: queue.Queue[AudioWindow | None] = queue.Queue()
        self.high_water = high_water
        self.dropped = 0

    def feed(self, stream, cfg: ChunkConfig) -> threading.Thread:
        def run():
            for window in chunk_stream(stream, cfg):
                while self._queue.qsize() >= self.high_water:
                    try:
                        self._queue.get_nowait()
                        self.dropped += 1
                        log.warning("window queue over high-water mark; dropped oldest")
                    except queue.Empty:
                        break
                self._queue.put(window)
            self._queue.put(None)

        thread = threading.Thread(target=run, daemon=True)
        thread.start()
        return thread

    def windows(self) -> Iterable[AudioWindow]:
        while True:
            window = self._queue.get()
            if window is None:
                return
            yield window


@dataclass
class UtteranceCapture:
    samples: np.ndarray
    truncated: bool  # stream ended before a full silence span was seen
    silent: bool  # no frame ever rose above the threshold

    @property
    def duration(self) -> float:
        return len(self.samples) / 16000.0


def endpoint_silence(
    stream,
    amp_threshold: float = DEFAULT_AMP_THRESHOLD,
    silence_seconds: float = 5.0,
    sample_rate: int = 16000,
) -> UtteranceCapture:
    """Accumulate audio until every 250 ms frame in a trailing span is quiet.

    Returns everything captured up to and including the silence span,
    concatenated into one waveform. A loud frame restarts the silence timer.
    """
    frame_len = round(SILENCE_FRAME_SECONDS * sample_rate)
    needed_quiet = math.ceil(silence_seconds / SILENCE_FRAME_SECONDS)
    captured: list[np.ndarray] = []
    pending = np.empty(0, dtype=np.float64)
    quiet_run = 0
    heard_anything = False
    for block in as_sample_blocks(stream):
        pending = np.concatenate([pending, block])
        while len(pending) >= frame_len:
            frame, pending = pending[:frame_len], pending[frame_len:]
            captured.append(frame)
            rms = float(np.sqrt(np.mean(frame**2)))
            if rms < amp_threshold:
                quiet_run += 1
            else:
                quiet_run = 0
                heard_anything = True
            if quiet_run >= needed_quiet:
                return UtteranceCapture(
                    np.concatenate(captured), truncated=False, silent=not heard_anything
                )
    if len(pending):
        captured.append(pending)
        heard_anything = heard_anything or float(np.sqrt(np.mean(pending**2))) >= amp_threshold
    samples = np.concatenate(captured) if captured else np.empty(0)
    return UtteranceCapture(samples, truncated=True, silent=not heard_anything)
