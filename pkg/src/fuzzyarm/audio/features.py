"""STFT and log-mel filterbank features for the wake-word classifier.

Geometry follows the spectrogram-transformer family the classifier belongs
to: 25 ms frames, 10 ms hop, Hann taper, 512-point transform, 128 mel bands.
A cepstral DCT step is available but optional.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

LOG_FLOOR = 1e-10
N_MELS = 128


@dataclass(frozen=True)
class FeatureFrame:
    energies: np.ndarray  # log-mel energies, length n_mels
    frame_time: float  # seconds, frame start relative to the stream


def hann(length: int) -> np.ndarray:
    return np.hanning(length)


def frame_count(window_len: int, frame_len: int, hop: int) -> int:
    """Frames fully inside the window: floor((len - frame) / hop) + 1."""
    if window_len < frame_len:
        return 1  # the single zero-padded frame
    return (window_len - frame_len) // hop + 1


def stft(
    samples: np.ndarray,
    frame_len: int = 400,
    hop: int = 160,
    window: np.ndarray | None = None,
    n_fft: int | None = None,
) -> np.ndarray:
    """Complex spectrogram, shape (frames, n_fft // 2 + 1).

    Frames shorter than n_fft are zero-padded into the transform; n_fft
    defaults to the next power of two at or above frame_len.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if n_fft is None:
        n_fft = 1
        while n_fft < frame_len:
            n_fft *= 2
    if n_fft & (n_fft - 1):
        raise ValueError(f"n_fft must be a power of two, got {n_fft}")
    if frame_len > n_fft:
        raise ValueError(f"frame_len {frame_len} exceeds n_fft {n_fft}")
    if window is None:
        window = hann(frame_len)
    if len(window) != frame_len:
        raise ValueError("taper length must equal frame_len")
    if len(samples) < frame_len:
        samples = np.concatenate([samples, np.zeros(frame_len - len(samples))])
    n_frames = frame_count(len(samples), frame_len, hop)
    frames = np.lib.stride_tricks.sliding_window_view(samples, frame_len)[::hop][:n_frames]
    return np.fft.rfft(frames * window, n=n_fft, axis=1)


def mel_from_hz(f: np.ndarray | float) -> np.ndarray | float:
    return 2595.0 * np.log10(1.0 + np.asarray(f) / 700.0)


def hz_from_mel(m: np.ndarray | float) -> np.ndarray | float:
    return 700.0 * (10.0 ** (np.asarray(m) / 2595.0) - 1.0)


@lru_cache(maxsize=8)
def mel_filterbank(sample_rate: int, n_fft: int, n_mels: int = N_MELS) -> np.ndarray:
    """Triangular mel filters over [0, sr/2], shape (n_mels, n_fft//2 + 1).

    Weights integrate each triangle over the frequency interval an FFT bin
    covers (rather than sampling at bin centers), so every filter keeps a
    positive, contiguous footprint even when filters are narrower than a bin.
    """
    n_bins = n_fft // 2 + 1
    bin_width = sample_rate / n_fft
    edges_hz = np.asarray(hz_from_mel(np.linspace(0.0, mel_from_hz(sample_rate / 2.0), n_mels + 2)))

    def ramp_integral(a: float, b: float, f0: float, f1: float, rising: bool) -> float:
        # Integral of the triangle edge over [a, b] clipped to [f0, f1].
        lo, hi = max(a, f0), min(b, f1)
        if hi <= lo or f1 <= f0:
            return 0.0

        def val(f: float) -> float:
            return (f - f0) / (f1 - f0) if rising else (f1 - f) / (f1 - f0)

        return 0.5 * (val(lo) + val(hi)) * (hi - lo)

    bank = np.zeros((n_mels, n_bins))
    for j in range(n_mels):
        f0, f1, f2 = edges_hz[j], edges_hz[j + 1], edges_hz[j + 2]
        k_lo = max(0, int((f0 - bin_width / 2) // bin_width))
        k_hi = min(n_bins - 1, int((f2 + bin_width / 2) // bin_width) + 1)
        for k in range(k_lo, k_hi + 1):
            a = k * bin_width - bin_width / 2
            b = k * bin_width + bin_width / 2
            area = ramp_integral(a, b, f0, f1, rising=True) + ramp_integral(a, b, f1, f2, rising=False)
            bank[j, k] = area / bin_width
    return bank


def log_mel(
    spectrogram: np.ndarray,
    sample_rate: int = 16000,
    n_fft: int = 512,
    n_mels: int = N_MELS,
    start_time: float = 0.0,
    hop: int = 160,
) -> list[FeatureFrame]:
    """Natural-log mel energies per frame from a (complex or magnitude) STFT."""
    power = np.abs(spectrogram) ** 2
    bank = mel_filterbank(sample_rate, n_fft, n_mels)
    energies = np.log(np.maximum(power @ bank.T, LOG_FLOOR))
    return [
        FeatureFrame(energies[i], start_time + i * hop / sample_rate)
        for i in range(energies.shape[0])
    ]


def mfcc(frames: list[FeatureFrame], n_coeffs: int = 13) -> np.ndarray:
    """Optional cepstral step: orthonormal DCT-II over the log-mel energies."""
    from scipy.fftpack import dct

    stack = np.stack([f.energies for f in frames])
    return dct(stack, type=2, axis=1, norm="ortho")[:, :n_coeffs]
