"""Deterministic signal synthesis for tests and demo recordings."""

from __future__ import annotations

import numpy as np

from .wake import MARKER_FREQS


def tone(freq: float, duration: float, sample_rate: int = 16000, amp: float = 0.5) -> np.ndarray:
    t = np.arange(round(duration * sample_rate)) / sample_rate
    return amp * np.sin(2 * np.pi * freq * t)


def silence(duration: float, sample_rate: int = 16000) -> np.ndarray:
    return np.zeros(round(duration * sample_rate))


def noise_burst(duration: float, sample_rate: int = 16000, amp: float = 0.2, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return amp * rng.standard_normal(round(duration * sample_rate))


def wake_marker(duration: float = 0.6, sample_rate: int = 16000, amp: float = 0.4) -> np.ndarray:
    """The two-tone burst the mock wake classifier is keyed on."""
    return sum(tone(f, duration, sample_rate, amp / len(MARKER_FREQS)) for f in MARKER_FREQS)


def demo_turn(
    speech_duration: float = 1.5,
    sample_rate: int = 16000,
    lead_in: float = 0.5,
    seed: int = 0,
) -> np.ndarray:
    """Marker burst, a noise burst standing in for speech, then 5 s silence.

    The pause after the marker keeps the first full wake window clear of
    speech energy so the mock classifier scores it cleanly.
    """
    return np.concatenate(
        [
            silence(lead_in, sample_rate),
            wake_marker(sample_rate=sample_rate),
            silence(1.0, sample_rate),
            noise_burst(speech_duration, sample_rate, seed=seed),
            # Slightly over 5 s so the trailing-silence rule fires even when
            # frame boundaries straddle the speech/silence edge.
            silence(5.5, sample_rate),
        ]
    )
