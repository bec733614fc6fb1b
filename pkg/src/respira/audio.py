"""WAV loading, resampling, silence trimming, framing, and spectral transforms.

Everything downstream (hand-crafted features and embedding windows) consumes
the representations built here. All functions are pure; clips and spectrogram
objects are treated as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import floor, gcd
from pathlib import Path

import numpy as np
from scipy.io import wavfile
from scipy.signal import resample_poly

ACOUSTIC_RATE = 22050
EMBEDDING_RATE = 48000
DEFAULT_FRAME_LENGTH = 2048
DEFAULT_HOP_LENGTH = 512
DEFAULT_TOP_DB = 60.0


class AudioFormatError(ValueError):
    """Unreadable or unsupported WAV content."""


@dataclass(frozen=True)
class AudioClip:
    """Mono waveform with amplitudes in [-1, 1]."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or len(samples) == 0:
            raise ValueError("clip must hold a non-empty 1-D sample array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("clip contains non-finite samples")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class FrameSequence:
    frames: np.ndarray  # (n_frames, frame_length)
    frame_length: int
    hop_length: int
    sample_rate: int
    centered: bool

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]


@dataclass(frozen=True)
class Spectrogram:
    magnitudes: np.ndarray  # (n_bins, n_frames), non-negative
    bin_frequencies: np.ndarray
    frame_times: np.ndarray
    sample_rate: int

    @property
    def fft_size(self) -> int:
        return 2 * (self.magnitudes.shape[0] - 1)

    @property
    def n_frames(self) -> int:
        return self.magnitudes.shape[1]


@dataclass(frozen=True)
class MelSpectrogram:
    energies: np.ndarray  # (n_mels, n_frames), non-negative
    n_mels: int
    fmin: float
    fmax: float
    sample_rate: int

    @property
    def n_frames(self) -> int:
        return self.energies.shape[1]


@dataclass(frozen=True)
class TrimResult:
    clip: AudioClip
    start: int
    end: int
    all_silent: bool


def load_wav(path) -> AudioClip:
    """Read a RIFF PCM WAV file as a mono clip scaled to [-1, 1].

    Integer encodings (8/16/24/32-bit) are scaled by their full-scale value;
    24-bit arrives from scipy packed into the high bytes of int32, so int32
    scaling covers it. Multichannel input is averaged to mono.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such audio file: {path}")
    try:
        rate, data = wavfile.read(str(path))
    except Exception as exc:
        raise AudioFormatError(f"{path}: {exc}") from exc
    if data.size == 0:
        raise AudioFormatError(f"{path}: zero-length audio")
    if data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    elif data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        samples = data.astype(np.float64) / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise AudioFormatError(f"{path}: unsupported sample dtype {data.dtype}")
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    return AudioClip(samples=samples, sample_rate=int(rate))


def resampled_length(n: int, source_rate: int, target_rate: int) -> int:
    """Output length contract: round(n * target / source), half away from zero."""
    return int(floor(n * target_rate / source_rate + 0.5))


def resample(clip: AudioClip, target_rate: int) -> AudioClip:
    """Band-limited polyphase resampling to target_rate."""
    if target_rate <= 0:
        raise ValueError("target_rate must be positive")
    if target_rate == clip.sample_rate:
        return clip
    g = gcd(target_rate, clip.sample_rate)
    up, down = target_rate // g, clip.sample_rate // g
    out = resample_poly(clip.samples, up, down)
    n_out = resampled_length(len(clip), clip.sample_rate, target_rate)
    if len(out) > n_out:
        out = out[:n_out]
    elif len(out) < n_out:
        out = np.pad(out, (0, n_out - len(out)))
    return AudioClip(samples=out, sample_rate=target_rate)


def _frame_rms(samples: np.ndarray, frame_length: int, hop_length: int) -> np.ndarray:
    """RMS per frame at offsets 0, hop, 2*hop, ...; tail frames may be partial."""
    offsets = range(0, len(samples), hop_length)
    return np.array([
        np.sqrt(np.mean(samples[o:o + frame_length] ** 2)) for o in offsets
    ])


def trim_silence(
    clip: AudioClip,
    top_db: float = DEFAULT_TOP_DB,
    frame_length: int = DEFAULT_FRAME_LENGTH,
    hop_length: int = DEFAULT_HOP_LENGTH,
) -> TrimResult:
    """Drop leading/trailing frames whose RMS sits more than top_db below peak RMS.

    Boundary estimate is accurate to one hop on both sides. Exact idempotence
    requires hop_length to divide frame_length (true for the defaults).
    """
    if top_db <= 0:
        raise ValueError("top_db must be positive")
    rms = _frame_rms(clip.samples, frame_length, hop_length)
    peak = rms.max()
    if peak == 0.0:
        return TrimResult(clip=clip, start=0, end=len(clip), all_silent=True)
    threshold = peak * 10.0 ** (-top_db / 20.0)
    keep = np.flatnonzero(rms >= threshold)
    first, last = int(keep[0]), int(keep[-1])
    # A frame straddling the onset pins the onset to its trailing hop; the
    # clip boundary frames are kept whole so repeated trimming is identity.
    start = 0 if first == 0 else first * hop_length + frame_length - hop_length
    end = len(clip) if last == len(rms) - 1 else (last + 1) * hop_length
    start = min(start, end - 1)
    trimmed = AudioClip(samples=clip.samples[start:end], sample_rate=clip.sample_rate)
    return TrimResult(clip=trimmed, start=start, end=end, all_silent=False)


def frame_signal(
    clip: AudioClip,
    frame_length: int = DEFAULT_FRAME_LENGTH,
    hop_length: int = DEFAULT_HOP_LENGTH,
    center: bool = True,
) -> FrameSequence:
    """Slice the waveform into overlapping frames.

    Centered mode reflection-pads frame_length//2 on both ends and zero-pads a
    final partial frame; frame t is then centered on sample t*hop_length.
    """
    if frame_length < 1:
        raise ValueError("frame_length must be >= 1")
    if hop_length < 1:
        raise ValueError("hop_length must be >= 1")
    x = clip.samples
    if center:
        pad = frame_length // 2
        if len(x) > 1:
            # np.pad reflect caps at len-1 per application; loop for tiny clips
            padded = x
            while pad > 0:
                step = min(pad, len(padded) - 1)
                padded = np.pad(padded, (step, step), mode="reflect")
                pad -= step
        else:
            padded = np.pad(x, (frame_length // 2, frame_length // 2), mode="edge")
        n_frames = 1 + len(x) // hop_length
        total = (n_frames - 1) * hop_length + frame_length
        if total > len(padded):
            padded = np.pad(padded, (0, total - len(padded)))
        x = padded
    else:
        if len(x) < frame_length:
            raise ValueError("clip shorter than one frame (no centering)")
        n_frames = 1 + (len(x) - frame_length) // hop_length
    idx = np.arange(frame_length)[None, :] + hop_length * np.arange(n_frames)[:, None]
    return FrameSequence(
        frames=x[idx],
        frame_length=frame_length,
        hop_length=hop_length,
        sample_rate=clip.sample_rate,
        centered=center,
    )


def stft(frames: FrameSequence, fft_size: int | None = None) -> Spectrogram:
    """Hann-windowed real-FFT magnitude per frame."""
    if fft_size is None:
        fft_size = 1
        while fft_size < frames.frame_length:
            fft_size *= 2
    if fft_size < frames.frame_length:
        raise ValueError("fft_size must be >= frame_length")
    if fft_size & (fft_size - 1):
        raise ValueError("fft_size must be a power of two")
    window = hann_window(frames.frame_length)
    mags = np.abs(np.fft.rfft(frames.frames * window, n=fft_size, axis=1)).T
    sr = frames.sample_rate
    bins = np.arange(mags.shape[0]) * sr / fft_size
    if frames.centered:
        centers = np.arange(frames.n_frames) * frames.hop_length
    else:
        centers = np.arange(frames.n_frames) * frames.hop_length + frames.frame_length / 2
    return Spectrogram(
        magnitudes=mags,
        bin_frequencies=bins,
        frame_times=centers / sr,
        sample_rate=sr,
    )


def hann_window(length: int) -> np.ndarray:
    # periodic variant, as used for spectral analysis
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(length) / length)


def hz_to_mel(hz):
    """Slaney-style mel scale: linear below 1 kHz, logarithmic above."""
    hz = np.asarray(hz, dtype=np.float64)
    f_sp = 200.0 / 3.0
    min_log_hz = 1000.0
    min_log_mel = min_log_hz / f_sp
    logstep = np.log(6.4) / 27.0
    mel = hz / f_sp
    above = hz >= min_log_hz
    mel = np.where(above, min_log_mel + np.log(np.maximum(hz, min_log_hz) / min_log_hz) / logstep, mel)
    return mel


def mel_to_hz(mel):
    mel = np.asarray(mel, dtype=np.float64)
    f_sp = 200.0 / 3.0
    min_log_hz = 1000.0
    min_log_mel = min_log_hz / f_sp
    logstep = np.log(6.4) / 27.0
    hz = mel * f_sp
    above = mel >= min_log_mel
    hz = np.where(above, min_log_hz * np.exp(logstep * (mel - min_log_mel)), hz)
    return hz


def mel_filterbank(
    n_mels: int,
    fft_size: int,
    sample_rate: int,
    fmin: float = 0.0,
    fmax: float | None = None,
) -> np.ndarray:
    """Triangular mel filters sampled at FFT bin frequencies, area-normalized."""
    if n_mels < 1:
        raise ValueError("n_mels must be >= 1")
    if fmax is None:
        fmax = sample_rate / 2.0
    if not fmin < fmax <= sample_rate / 2.0:
        raise ValueError("need fmin < fmax <= sample_rate/2")
    n_bins = fft_size // 2 + 1
    bin_freqs = np.arange(n_bins) * sample_rate / fft_size
    mel_points = np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_mels + 2)
    hz_points = mel_to_hz(mel_points)
    weights = np.zeros((n_mels, n_bins))
    for m in range(n_mels):
        lower, center, upper = hz_points[m], hz_points[m + 1], hz_points[m + 2]
        rise = (bin_freqs - lower) / (center - lower)
        fall = (upper - bin_freqs) / (upper - center)
        weights[m] = np.maximum(0.0, np.minimum(rise, fall))
        weights[m] *= 2.0 / (upper - lower)  # Slaney area normalization
    return weights


def mel_spectrogram(
    spec: Spectrogram,
    n_mels: int,
    fmin: float = 0.0,
    fmax: float | None = None,
) -> MelSpectrogram:
    """Mel-band energies of the power spectrogram."""
    fb = mel_filterbank(n_mels, spec.fft_size, spec.sample_rate, fmin, fmax)
    energies = fb @ (spec.magnitudes ** 2)
    return MelSpectrogram(
        energies=energies,
        n_mels=n_mels,
        fmin=fmin,
        fmax=fmax if fmax is not None else spec.sample_rate / 2.0,
        sample_rate=spec.sample_rate,
    )
