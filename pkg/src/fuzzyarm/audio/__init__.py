"""Streaming audio frontend: windowing, features, wake detection, end-pointing."""

from .features import (
    N_MELS,
    FeatureFrame,
    frame_count,
    hann,
    hz_from_mel,
    log_mel,
    mel_filterbank,
    mel_from_hz,
    mfcc,
    stft,
)
from .wake import (
    DEFAULT_AMP_THRESHOLD,
    MARKER_FREQS,
    SILENCE_FRAME_SECONDS,
    Classifier,
    DetectionResult,
    MarkerToneClassifier,
    UtteranceCapture,
    WakeConfig,
    WakeEvent,
    WindowPipeline,
    detect_wake,
    endpoint_silence,
    scan_for_wake,
)
from .windowing import AudioWindow, ChunkConfig, chunk_stream, load_wav, save_wav

__all__ = [
    "AudioWindow",
    "ChunkConfig",
    "Classifier",
    "DEFAULT_AMP_THRESHOLD",
    "DetectionResult",
    "FeatureFrame",
    "MARKER_FREQS",
    "MarkerToneClassifier",
    "N_MELS",
    "SILENCE_FRAME_SECONDS",
    "UtteranceCapture",
    "WakeConfig",
    "WakeEvent",
    "WindowPipeline",
    "chunk_stream",
    "detect_wake",
    "endpoint_silence",
    "frame_count",
    "hann",
    "hz_from_mel",
    "load_wav",
    "log_mel",
    "mel_filterbank",
    "mel_from_hz",
    "mfcc",
    "save_wav",
    "scan_for_wake",
    "stft",
]
