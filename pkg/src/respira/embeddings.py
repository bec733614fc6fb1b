"""Windowed 512-d audio embeddings: extraction, aggregation, and sidecar I/O.

The pretrained network itself lives outside this package; it is reached either
through an EmbeddingRunner callable or through precomputed `.l3emb` sidecar
files produced by the exporter. A seeded stub runner stands in for tests.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .audio import AudioClip, frame_signal, mel_spectrogram, stft

EMBED_DIM = 512
WINDOW_SEC = 1.0
WINDOW_HOP_SEC = 0.1
EMBED_MELS = 256
EMBED_FRAME_LENGTH = 512
EMBED_HOP_LENGTH = 242
EMBED_FFT_SIZE = 2048

SIDECAR_MAGIC = b"L3EMB1\n"
SIDECAR_SUFFIX = ".l3emb"
_HEADER_RE = re.compile(rb"^rows=(\d+) cols=(\d+) dtype=f32le$")


class SidecarFormatError(ValueError):
    """Malformed `.l3emb` sidecar content."""


@dataclass(frozen=True)
class EmbeddingMatrix:
    rows: np.ndarray  # (n_windows, 512)
    sample_id: str
    window_length: float = WINDOW_SEC
    hop: float = WINDOW_HOP_SEC

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] != EMBED_DIM:
            raise ValueError(f"embedding rows must be (n, {EMBED_DIM}), got {rows.shape}")
        if rows.shape[0] < 1:
            raise ValueError("embedding matrix needs at least one window")
        if not np.all(np.isfinite(rows)):
            raise ValueError("embedding matrix contains non-finite values")
        object.__setattr__(self, "rows", rows)

    @property
    def n_windows(self) -> int:
        return self.rows.shape[0]


@dataclass(frozen=True)
class AggregatedEmbedding:
    values: np.ndarray  # 512 means ++ 512 standard deviations

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (2 * EMBED_DIM,):
            raise ValueError(f"aggregated embedding must have {2 * EMBED_DIM} values")
        object.__setattr__(self, "values", values)


class StubEmbeddingRunner:
    """Deterministic stand-in for the pretrained embedding network.

    Applies a seeded signed-bucket projection of the flattened, L2-normalized
    mel window down to 512 dims, then a ReLU. Same seed and input always give
    the same output; amplitude scaling of the window is removed by the
    normalization.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._maps: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def _projection(self, size: int) -> tuple[np.ndarray, np.ndarray]:
        if size not in self._maps:
            rng = np.random.default_rng([self.seed, size])
            buckets = rng.integers(0, EMBED_DIM, size=size)
            signs = rng.choice(np.array([-1.0, 1.0]), size=size)
            self._maps[size] = (buckets, signs)
        return self._maps[size]

    def __call__(self, mel_window: np.ndarray) -> np.ndarray:
        v = np.asarray(mel_window, dtype=np.float64).ravel()
        norm = np.linalg.norm(v)
        if norm > 0.0:
            v = v / norm
        buckets, signs = self._projection(v.size)
        pre_activation = np.bincount(buckets, weights=signs * v, minlength=EMBED_DIM)
        return np.maximum(pre_activation, 0.0)


def stub_runner(seed: int) -> StubEmbeddingRunner:
    return StubEmbeddingRunner(seed)


def window_count(n_samples: int, sample_rate: int) -> int:
    """Windows of 1.0 s at 0.1 s hop; short clips are padded to one window."""
    win = round(WINDOW_SEC * sample_rate)
    hop = round(WINDOW_HOP_SEC * sample_rate)
    if n_samples <= win:
        return 1
    return 1 + (n_samples - win) // hop


def embed_windows(clip: AudioClip, runner, sample_id: str = "") -> EmbeddingMatrix:
    """Run the embedding model over overlapping 1-second windows.

    Each window is converted to a 256-mel spectrogram before the runner sees
    it; clips shorter than one window are zero-padded.
    """
    sr = clip.sample_rate
    win = round(WINDOW_SEC * sr)
    hop = round(WINDOW_HOP_SEC * sr)
    samples = clip.samples
    if len(samples) < win:
        samples = np.pad(samples, (0, win - len(samples)))
    n_windows = window_count(len(clip), sr)
    rows = np.empty((n_windows, EMBED_DIM))
    for w in range(n_windows):
        chunk = AudioClip(samples=samples[w * hop:w * hop + win], sample_rate=sr)
        frames = frame_signal(chunk, EMBED_FRAME_LENGTH, EMBED_HOP_LENGTH, center=True)
        mel = mel_spectrogram(stft(frames, EMBED_FFT_SIZE), n_mels=EMBED_MELS)
        try:
            out = np.asarray(runner(mel.energies), dtype=np.float64)
        except Exception as exc:
            raise RuntimeError(f"embedding runner failed on window {w}: {exc}") from exc
        if out.shape != (EMBED_DIM,):
            raise RuntimeError(
                f"embedding runner returned shape {out.shape} on window {w}, "
                f"expected ({EMBED_DIM},)")
        rows[w] = out
    return EmbeddingMatrix(rows=rows, sample_id=sample_id)


def aggregate_embeddings(matrix: EmbeddingMatrix) -> AggregatedEmbedding:
    """Per-dimension mean and population standard deviation, concatenated."""
    means = matrix.rows.mean(axis=0)
    stds = matrix.rows.std(axis=0)
    return AggregatedEmbedding(values=np.concatenate([means, stds]))


def write_sidecar(path, matrix: EmbeddingMatrix, comments: tuple[str, ...] = ()) -> None:
    path = Path(path)
    payload = matrix.rows.astype("<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(SIDECAR_MAGIC)
        for comment in comments:
            fh.write(b"# " + comment.encode() + b"\n")
        fh.write(f"rows={matrix.n_windows} cols={EMBED_DIM} dtype=f32le\n".encode())
        fh.write(payload)


def _read_binary_sidecar(path: Path) -> np.ndarray:
    with open(path, "rb") as fh:
        if fh.readline() != SIDECAR_MAGIC:
            raise SidecarFormatError(f"{path}: bad magic")
        while True:
            line = fh.readline()
            if not line:
                raise SidecarFormatError(f"{path}: missing header line")
            if line.startswith(b"#"):
                continue
            match = _HEADER_RE.match(line.rstrip(b"\n"))
            if not match:
                raise SidecarFormatError(f"{path}: unparseable header {line!r}")
            rows, cols = int(match.group(1)), int(match.group(2))
            break
        if cols != EMBED_DIM:
            raise SidecarFormatError(f"{path}: wrong row width {cols}, expected {EMBED_DIM}")
        payload = fh.read()
    expected = rows * cols * 4
    if len(payload) != expected:
        raise SidecarFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}")
    return np.frombuffer(payload, dtype="<f4").reshape(rows, cols)


def _read_csv_sidecar(path: Path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    if data.shape[1] != EMBED_DIM:
        raise SidecarFormatError(
            f"{path}: wrong row width {data.shape[1]}, expected {EMBED_DIM}")
    return data


def load_precomputed(path) -> EmbeddingMatrix:
    """Parse a `.l3emb` (binary) or `.l3emb.csv` (text fixture) sidecar."""
    path = Path(path)
    if path.name.endswith(".l3emb.csv"):
        rows = _read_csv_sidecar(path)
        sample_id = path.name[:-len(".l3emb.csv")]
    elif path.suffix == SIDECAR_SUFFIX:
        rows = _read_binary_sidecar(path)
        sample_id = path.stem
    else:
        raise SidecarFormatError(f"{path}: unrecognized sidecar extension")
    if not np.all(np.isfinite(rows)):
        raise SidecarFormatError(f"{path}: non-finite embedding values")
    return EmbeddingMatrix(rows=rows, sample_id=sample_id)


def sidecar_path(directory, sample_id: str) -> Path:
    """Preferred sidecar location for a sample; CSV fallback if present."""
    directory = Path(directory)
    binary = directory / f"{sample_id}{SIDECAR_SUFFIX}"
    if binary.exists():
        return binary
    return directory / f"{sample_id}{SIDECAR_SUFFIX}.csv"
