"""Shared synthetic-signal builders for the test suite."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.io import wavfile

from respira.audio import AudioClip


def sine_clip(freq: float, seconds: float = 1.0, rate: int = 22050,
              amplitude: float = 0.8) -> AudioClip:
    t = np.arange(round(seconds * rate)) / rate
    return AudioClip(samples=amplitude * np.sin(2 * np.pi * freq * t), sample_rate=rate)


def noise_clip(seconds: float = 1.0, rate: int = 22050, seed: int = 0,
               amplitude: float = 0.5) -> AudioClip:
    rng = np.random.default_rng(seed)
    return AudioClip(samples=amplitude * rng.uniform(-1, 1, round(seconds * rate)),
                     sample_rate=rate)


def click_train_clip(period_s: float, n_clicks: int, rate: int = 22050,
                     lead_s: float = 0.25, click_ms: float = 5.0) -> AudioClip:
    total = round((lead_s + period_s * n_clicks) * rate)
    samples = np.zeros(total)
    width = round(click_ms / 1000 * rate)
    rng = np.random.default_rng(7)
    for k in range(n_clicks):
        start = round((lead_s + k * period_s) * rate)
        samples[start:start + width] = 0.9 * rng.uniform(0.5, 1.0, width)
    return AudioClip(samples=samples, sample_rate=rate)


def write_wav(path: Path, clip: AudioClip, dtype: str = "int16") -> Path:
    if dtype == "int16":
        data = np.clip(np.round(clip.samples * 32767), -32768, 32767).astype(np.int16)
    elif dtype == "float32":
        data = clip.samples.astype(np.float32)
    else:
        raise ValueError(dtype)
    wavfile.write(str(path), clip.sample_rate, data)
    return path


