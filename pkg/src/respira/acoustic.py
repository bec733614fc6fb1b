"""Hand-crafted acoustic descriptors and their 477-value summary vector.

Four clip-level scalars (duration, onset count, tempo, dominant period) plus
43 per-frame descriptor series (RMS, centroid, roll-off, ZCR, 13 MFCC and
their first/second deltas), each condensed into 11 summary statistics:
4 + 43 * 11 = 477.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from .audio import (
    AudioClip,
    DEFAULT_FRAME_LENGTH,
    DEFAULT_HOP_LENGTH,
    FrameSequence,
    MelSpectrogram,
    Spectrogram,
    frame_signal,
    mel_spectrogram,
    stft,
)

N_MFCC = 13
MFCC_MELS = 128
LOG_FLOOR = 1e-10
DELTA_WIDTH = 9
ROLLOFF_FRACTION = 0.85

# Onset peak picking: a peak must top the local mean by a fraction of the
# envelope max and be a strict local maximum inside a short window.
ONSET_MEAN_WINDOW_SEC = 0.3
ONSET_MAX_WINDOW_SEC = 0.05
ONSET_DELTA = 0.07

TEMPO_PRIOR_BPM = 120.0
TEMPO_PRIOR_STD_OCTAVES = 1.0
TEMPO_MIN_BPM = 30.0
TEMPO_MAX_BPM = 300.0

STAT_NAMES = (
    "mean", "median", "rms", "max", "min",
    "q1", "q3", "iqr", "std", "skewness", "kurtosis",
)
SCALAR_NAMES = ("duration", "onset_count", "tempo", "dominant_period")


@dataclass(frozen=True)
class DescriptorSeries:
    name: str
    values: np.ndarray


@dataclass(frozen=True)
class SummaryStatistics:
    mean: float
    median: float
    rms: float
    max: float
    min: float
    q1: float
    q3: float
    iqr: float
    std: float
    skewness: float
    kurtosis: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in STAT_NAMES])


@dataclass(frozen=True)
class TempoEstimate:
    bpm: float
    degenerate: bool  # flat envelope: prior center returned


def duration(clip: AudioClip) -> float:
    """Length in seconds; callers pass the silence-trimmed clip."""
    return len(clip) / clip.sample_rate


def series_names(n_mfcc: int = N_MFCC) -> list[str]:
    names = ["rms", "centroid", "rolloff", "zcr"]
    names += [f"mfcc{i:02d}" for i in range(n_mfcc)]
    names += [f"delta_mfcc{i:02d}" for i in range(n_mfcc)]
    names += [f"delta2_mfcc{i:02d}" for i in range(n_mfcc)]
    return names


def feature_names(n_mfcc: int = N_MFCC) -> list[str]:
    """Ordered registry of output names; index = position in the vector."""
    names = list(SCALAR_NAMES)
    for series in series_names(n_mfcc):
        names += [f"{series}_{stat}" for stat in STAT_NAMES]
    return names


FEATURE_NAMES = feature_names()


def onset_envelope(clip: AudioClip, frame_length: int = DEFAULT_FRAME_LENGTH,
                   hop_length: int = DEFAULT_HOP_LENGTH, n_mels: int = MFCC_MELS):
    """Spectral-flux envelope: rectified log-mel band increases summed per frame.

    The clip is peak-normalized first so the envelope (and the onset/tempo
    values built on it) is exactly invariant to amplitude scaling despite the
    log floor. Returns (envelope, frame_rate_hz).
    """
    peak = np.max(np.abs(clip.samples))
    if peak > 0.0:
        clip = AudioClip(samples=clip.samples / peak, sample_rate=clip.sample_rate)
    frames = frame_signal(clip, frame_length, hop_length, center=True)
    melspec = mel_spectrogram(stft(frames), n_mels=n_mels)
    log_mel = np.log(np.maximum(melspec.energies, LOG_FLOOR))
    flux = np.maximum(0.0, np.diff(log_mel, axis=1)).sum(axis=0)
    envelope = np.concatenate([[0.0], flux])
    return envelope, clip.sample_rate / hop_length


def onset_count(clip: AudioClip, frame_length: int = DEFAULT_FRAME_LENGTH,
                hop_length: int = DEFAULT_HOP_LENGTH) -> int:
    envelope, frame_rate = onset_envelope(clip, frame_length, hop_length)
    peak_ceiling = envelope.max()
    if peak_ceiling <= 0.0:
        return 0
    w_mean = max(1, round(ONSET_MEAN_WINDOW_SEC * frame_rate))
    w_max = max(1, round(ONSET_MAX_WINDOW_SEC * frame_rate))
    count = 0
    for t in range(len(envelope)):
        value = envelope[t]
        if value <= 0.0:
            continue
        lo, hi = max(0, t - w_max), min(len(envelope), t + w_max + 1)
        neighborhood = envelope[lo:hi]
        if np.sum(neighborhood == value) > 1 or value < neighborhood.max():
            continue  # not a strict local max
        lo, hi = max(0, t - w_mean), min(len(envelope), t + w_mean + 1)
        if value > envelope[lo:hi].mean() + ONSET_DELTA * peak_ceiling:
            count += 1
    return count


def tempo(clip: AudioClip, frame_length: int = DEFAULT_FRAME_LENGTH,
          hop_length: int = DEFAULT_HOP_LENGTH) -> TempoEstimate:
    """Beat rate from the prior-weighted autocorrelation of the onset envelope."""
    envelope, frame_rate = onset_envelope(clip, frame_length, hop_length)
    if envelope.max() == envelope.min():
        return TempoEstimate(bpm=TEMPO_PRIOR_BPM, degenerate=True)
    env = envelope - envelope.mean()
    ac = np.correlate(env, env, mode="full")[len(env) - 1:]
    lag_min = max(1, round(frame_rate * 60.0 / TEMPO_MAX_BPM))
    lag_max = min(len(ac) - 2, round(frame_rate * 60.0 / TEMPO_MIN_BPM))
    if lag_min > lag_max:
        return TempoEstimate(bpm=TEMPO_PRIOR_BPM, degenerate=True)
    lags = np.arange(len(ac), dtype=np.float64)
    lags[0] = np.nan
    bpms = 60.0 * frame_rate / lags
    with np.errstate(invalid="ignore"):
        prior = np.exp(-0.5 * ((np.log2(bpms) - np.log2(TEMPO_PRIOR_BPM))
                               / TEMPO_PRIOR_STD_OCTAVES) ** 2)
    score = np.where(ac > 0.0, ac, 0.0) * prior
    window = score[lag_min:lag_max + 1]
    if window.max() <= 0.0:
        return TempoEstimate(bpm=TEMPO_PRIOR_BPM, degenerate=True)
    lag = lag_min + int(np.argmax(window))
    # parabolic refinement: the true period rarely sits on the lag grid
    s_prev, s_here, s_next = score[lag - 1], score[lag], score[lag + 1]
    denom = s_prev - 2.0 * s_here + s_next
    shift = 0.0 if denom == 0.0 else 0.5 * (s_prev - s_next) / denom
    shift = float(np.clip(shift, -0.5, 0.5))
    return TempoEstimate(bpm=60.0 * frame_rate / (lag + shift), degenerate=False)


def dominant_period(clip: AudioClip) -> float:
    """Frequency (Hz) of the largest full-signal FFT magnitude, DC excluded."""
    magnitudes = np.abs(np.fft.rfft(clip.samples))
    k = 1 + int(np.argmax(magnitudes[1:]))
    return k * clip.sample_rate / len(clip)


def rms_energy_series(spec: Spectrogram) -> DescriptorSeries:
    values = np.sqrt(np.mean(spec.magnitudes ** 2, axis=0))
    return DescriptorSeries(name="rms", values=values)


def spectral_centroid_series(spec: Spectrogram) -> DescriptorSeries:
    weights = spec.magnitudes.sum(axis=0)
    weighted = spec.bin_frequencies @ spec.magnitudes
    values = np.divide(weighted, weights, out=np.zeros_like(weighted),
                       where=weights > 0)
    return DescriptorSeries(name="centroid", values=values)


def rolloff_series(spec: Spectrogram, pct: float = ROLLOFF_FRACTION) -> DescriptorSeries:
    power = spec.magnitudes ** 2
    totals = power.sum(axis=0)
    cumulative = np.cumsum(power, axis=0)
    values = np.zeros(spec.n_frames)
    for t in range(spec.n_frames):
        if totals[t] > 0.0:
            k = int(np.argmax(cumulative[:, t] >= pct * totals[t]))
            values[t] = spec.bin_frequencies[k]
    return DescriptorSeries(name="rolloff", values=values)


def zcr_series(frames: FrameSequence) -> DescriptorSeries:
    signs = np.signbit(frames.frames)
    crossings = np.sum(signs[:, 1:] != signs[:, :-1], axis=1)
    return DescriptorSeries(name="zcr", values=crossings / frames.frame_length)


def mfcc_series(melspec: MelSpectrogram, n_mfcc: int = N_MFCC) -> list[DescriptorSeries]:
    """First n_mfcc coefficients of the orthonormal DCT-II of log mel power."""
    log_mel = np.log(np.maximum(melspec.energies, LOG_FLOOR))
    coeffs = dct(log_mel, type=2, norm="ortho", axis=0)[:n_mfcc]
    return [DescriptorSeries(name=f"mfcc{i:02d}", values=coeffs[i])
            for i in range(n_mfcc)]


def _delta_one(values: np.ndarray, width: int) -> np.ndarray:
    half = width // 2
    taps = np.arange(1, half + 1, dtype=np.float64)
    denominator = 2.0 * np.sum(taps ** 2)
    padded = np.pad(values, (half, half), mode="edge")
    out = np.zeros_like(values)
    for n in range(1, half + 1):
        out += n * (padded[half + n:half + n + len(values)]
                    - padded[half - n:half - n + len(values)])
    return out / denominator


def delta(block: list[DescriptorSeries], order: int = 1,
          width: int = DELTA_WIDTH) -> list[DescriptorSeries]:
    """Local linear-slope estimate along time; order 2 applies it twice."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    prefix = "delta_" if order == 1 else "delta2_"
    out = []
    for series in block:
        values = series.values
        for _ in range(order):
            values = _delta_one(values, width)
        out.append(DescriptorSeries(name=prefix + series.name, values=values))
    return out


def summarize(series: DescriptorSeries) -> SummaryStatistics:
    v = np.asarray(series.values, dtype=np.float64)
    if len(v) == 0:
        raise ValueError("cannot summarize an empty series")
    mean = float(np.mean(v))
    centered = v - mean
    m2 = float(np.mean(centered ** 2))
    q1, q3 = (float(q) for q in np.percentile(v, [25.0, 75.0]))
    # snap to the constant-series convention when variance is pure rounding noise
    constant = m2 <= 1e-24 * max(1.0, mean * mean)
    if constant:
        std = skewness = kurtosis = 0.0
    else:
        std = float(np.sqrt(m2))
        m3 = float(np.mean(centered ** 3))
        m4 = float(np.mean(centered ** 4))
        skewness = m3 / m2 ** 1.5
        kurtosis = m4 / (m2 * m2) - 3.0
    return SummaryStatistics(
        mean=mean,
        median=float(np.median(v)),
        rms=float(np.sqrt(np.mean(v ** 2))),
        max=float(np.max(v)),
        min=float(np.min(v)),
        q1=q1,
        q3=q3,
        iqr=q3 - q1,
        std=std,
        skewness=skewness,
        kurtosis=kurtosis,
    )


def acoustic_feature_vector(
    clip: AudioClip,
    frame_length: int = DEFAULT_FRAME_LENGTH,
    hop_length: int = DEFAULT_HOP_LENGTH,
    n_mels: int = MFCC_MELS,
    n_mfcc: int = N_MFCC,
    rolloff_pct: float = ROLLOFF_FRACTION,
    delta_width: int = DELTA_WIDTH,
) -> np.ndarray:
    """Full descriptor vector for one trimmed, resampled clip.

    Layout follows feature_names(): the four scalars, then 11 statistics per
    descriptor series in registry order.
    """
    frames = frame_signal(clip, frame_length, hop_length, center=True)
    spec = stft(frames)
    melspec = mel_spectrogram(spec, n_mels=n_mels)

    mfccs = mfcc_series(melspec, n_mfcc)
    series: list[DescriptorSeries] = [
        rms_energy_series(spec),
        spectral_centroid_series(spec),
        rolloff_series(spec, rolloff_pct),
        zcr_series(frames),
    ]
    series += mfccs
    series += delta(mfccs, order=1, width=delta_width)
    series += delta(mfccs, order=2, width=delta_width)

    values = [
        duration(clip),
        float(onset_count(clip, frame_length, hop_length)),
        tempo(clip, frame_length, hop_length).bpm,
        dominant_period(clip),
    ]
    for s in series:
        values.extend(summarize(s).as_array())
    out = np.array(values)
    if not np.all(np.isfinite(out)):
        raise ValueError("acoustic feature vector contains non-finite values")
    return out
