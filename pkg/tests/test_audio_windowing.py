"""Sliding-window scheduler: counts, overlap, containment, padding."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzyarm.audio import ChunkConfig, chunk_stream, load_wav, save_wav
from fuzzyarm.audio.synth import noise_burst

CFG = ChunkConfig()  # 2 s windows, 0.25 s step, 16 kHz


def test_defaults_and_overlap():
    assert CFG.chunk_seconds == 2.0
    assert CFG.step_seconds == 0.25
    assert CFG.overlap_seconds == 1.75
    assert CFG.window_samples == 32000
    assert CFG.step_samples == 4000


def test_four_second_stream_gives_nine_windows():
    # floor((4 - 2) / 0.25) + 1 = 9, starting 0.0 ... 2.0 s
    windows = list(chunk_stream(np.zeros(64000), CFG))
    assert len(windows) == 9
    assert [w.start_time for w in windows] == [0.25 * k for k in range(9)]
    assert all(len(w.samples) == 32000 for w in windows)


def test_consecutive_windows_share_exact_overlap():
    stream = np.arange(64000, dtype=np.float64)
    windows = list(chunk_stream(stream, CFG))
    shared = round(CFG.overlap_seconds * CFG.sample_rate)
    for a, b in zip(windows, windows[1:]):
        assert np.array_equal(a.samples[CFG.step_samples :], b.samples[:shared])


def test_short_stream_yields_single_padded_window():
    windows = list(chunk_stream(np.ones(1000), CFG))
    assert len(windows) == 1
    assert len(windows[0].samples) == 32000
    assert windows[0].samples[:1000].sum() == 1000
    assert windows[0].samples[1000:].sum() == 0


def test_empty_stream_yields_single_zero_window():
    windows = list(chunk_stream(np.zeros(0), CFG))
    assert len(windows) == 1
    assert not windows[0].samples.any()


def test_tail_not_covered_by_full_window_gets_padded_extra():
    windows = list(chunk_stream(np.ones(65000), CFG))
    assert len(windows) == 10
    assert windows[-1].samples[-1] == 0.0  # padded
    # Every real sample is inside some window.
    covered = int(round(windows[-1].start_time * CFG.sample_rate)) + 32000
    assert covered >= 65000


def test_step_equal_to_chunk_gives_disjoint_windows():
    cfg = ChunkConfig(chunk_seconds=2.0, step_seconds=2.0)
    assert cfg.overlap_seconds == 0.0
    stream = np.arange(96000, dtype=np.float64)
    windows = list(chunk_stream(stream, cfg))
    assert len(windows) == 3
    assert windows[1].samples[0] == 32000.0


def test_half_second_event_contained_in_seven_aligned_windows():
    # floor((T_c - 0.5) / T_s) + 1 = 7 for an event starting on the step grid.
    sr = CFG.sample_rate
    event_start, event_len = 2.0, 0.5
    stream = np.zeros(10 * sr)
    s0 = int(event_start * sr)
    stream[s0 : s0 + int(event_len * sr)] = 1.0
    containing = 0
    for w in chunk_stream(stream, CFG):
        ws = w.start_time
        if ws <= event_start and event_start + event_len <= ws + CFG.chunk_seconds:
            assert w.samples.sum() == event_len * sr  # whole event present
            containing += 1
    assert containing == 7


@given(start=st.floats(0.5, 7.0), duration=st.floats(0.05, 1.74))
@settings(max_examples=60, deadline=None)
def test_no_event_up_to_overlap_length_is_missed(start, duration):
    # Full containment is guaranteed for events up to T_o = T_c - T_s: the
    # admissible window-start interval has length T_c - duration, which is
    # then at least one step wide.
    sr = CFG.sample_rate
    stream = np.zeros(10 * sr)
    s0 = int(start * sr)
    n = max(1, int(duration * sr))
    stream[s0 : s0 + n] = 1.0
    whole = any(
        abs(w.samples.sum() - n) < 0.5 for w in chunk_stream(stream, CFG)
    )
    assert whole


def test_chunked_iterable_input_equals_array_input():
    stream = noise_burst(3.3, seed=5)
    as_array = [w.samples for w in chunk_stream(stream, CFG)]
    pieces = [stream[i : i + 777] for i in range(0, len(stream), 777)]
    as_blocks = [w.samples for w in chunk_stream(iter(pieces), CFG)]
    assert len(as_array) == len(as_blocks)
    for a, b in zip(as_array, as_blocks):
        assert np.array_equal(a, b)


def test_config_validation():
    with pytest.raises(ValueError):
        ChunkConfig(step_seconds=0.0)
    with pytest.raises(ValueError):
        ChunkConfig(chunk_seconds=1.0, step_seconds=2.0)


def test_wav_round_trip(tmp_path):
    samples = np.clip(noise_burst(0.5, amp=0.4, seed=8), -1.0, 1.0 - 1.0 / 32768.0)
    path = tmp_path / "clip.wav"
    save_wav(path, samples)
    loaded, rate = load_wav(path)
    assert rate == 16000
    assert len(loaded) == len(samples)
    assert np.max(np.abs(loaded - samples)) <= 0.5 / 32768.0
