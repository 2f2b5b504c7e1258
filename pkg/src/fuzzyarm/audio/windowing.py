"""Overlapping-window scheduler over streaming audio.

Windows of T_c seconds start every T_s seconds, so consecutive windows share
T_o = T_c - T_s seconds of samples; a phrase near a window boundary is still
seen whole by a neighbor. Only the window covering the stream tail is
zero-padded.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np


@dataclass(frozen=True)
class ChunkConfig:
    chunk_seconds: float = 2.0
    step_seconds: float = 0.25
    sample_rate: int = 16000

    def __post_init__(self) -> None:
        if not 0 < self.step_seconds <= self.chunk_seconds:
            raise ValueError(
                f"need 0 < step <= chunk, got step={self.step_seconds} chunk={self.chunk_seconds}"
            )
        if self.sample_rate <= 0:
            raise ValueError("sample rate must be positive")

    @property
    def overlap_seconds(self) -> float:
        return self.chunk_seconds - self.step_seconds

    @property
    def window_samples(self) -> int:
        return round(self.chunk_seconds * self.sample_rate)

    @property
    def step_samples(self) -> int:
        return round(self.step_seconds * self.sample_rate)


@dataclass(frozen=True)
class AudioWindow:
    samples: np.ndarray  # exactly window_samples long
    start_time: float  # seconds from stream start

    def __post_init__(self) -> None:
        if self.samples.ndim != 1:
            raise ValueError("audio windows are mono")


def as_sample_blocks(stream) -> Iterator[np.ndarray]:
    """Normalize an ndarray or an iterable of ndarrays into float blocks."""
    if isinstance(stream, np.ndarray):
        yield stream.astype(np.float64, copy=False)
        return
    for block in stream:
        yield np.asarray(block, dtype=np.float64)


def chunk_stream(stream, cfg: ChunkConfig) -> Iterator[AudioWindow]:
    """Yield windows starting at 0, T_s, 2*T_s, ...

    Emission stops at the first window that reaches the stream end; that
    window alone may be zero-padded. A stream shorter than one window yields
    a single padded window (an empty stream yields one all-zero window).
    """
    win = cfg.window_samples
    step = cfg.step_samples
    buffer = np.empty(0, dtype=np.float64)
    consumed = 0  # samples dropped from the front of the buffer
    start = 0  # next window start, in samples
    blocks = as_sample_blocks(stream)
    exhausted = False
    while True:
        # Read one sample beyond the window end so "reaches exactly the
        # stream end" is distinguishable from "stream continues".
        while not exhausted and consumed + len(buffer) <= start + win:
            block = next(blocks, None)
            if block is None:
                exhausted = True
            elif len(block):
                buffer = np.concatenate([buffer, block])
        total = consumed + len(buffer)
        end = start + win
        if total >= end:
            chunk = buffer[start - consumed : end - consumed]
            yield AudioWindow(chunk.copy(), start / cfg.sample_rate)
            if exhausted and total == end:
                return  # this window contains the stream end exactly
            start += step
            buffer = buffer[start - consumed :]
            consumed = start
            continue
        # Exhausted short of a full window: pad the tail and stop.
        chunk = buffer[start - consumed :]
        chunk = np.concatenate([chunk, np.zeros(win - len(chunk))])
        yield AudioWindow(chunk.copy(), start / cfg.sample_rate)
        return


def load_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Mono 16-bit PCM WAV as float samples in [-1, 1) plus its sample rate."""
    from scipy.io import wavfile

    rate, data = wavfile.read(path)
    if data.ndim != 1:
        raise ValueError(f"{path}: expected mono audio, got {data.shape[1]} channels")
    if data.dtype != np.int16:
        raise ValueError(f"{path}: expected 16-bit PCM, got {data.dtype}")
    return data.astype(np.float64) / 32768.0, int(rate)


def save_wav(path: str | Path, samples: np.ndarray, rate: int = 16000) -> None:
    from scipy.io import wavfile

    clipped = np.clip(samples, -1.0, 1.0 - 1.0 / 32768.0)
    wavfile.write(path, rate, np.round(clipped * 32768.0).astype(np.int16))
