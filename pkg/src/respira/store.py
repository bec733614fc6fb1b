"""On-disk feature store: acoustic vectors and aggregated embeddings as CSV."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .acoustic import FEATURE_NAMES
from .embeddings import EMBED_DIM

ACOUSTIC_FILE = "acoustic.csv"
EMBEDDINGS_FILE = "embeddings.csv"


def embedding_column_names() -> list[str]:
    return ([f"emb_mean_{i:03d}" for i in range(EMBED_DIM)]
            + [f"emb_std_{i:03d}" for i in range(EMBED_DIM)])


def write_feature_csv(path, header: list[str], rows: list[tuple[str, np.ndarray]]) -> None:
    """One row per sample_id; floats via repr() so reloads are bit-exact."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id"] + header)
        for sample_id, values in rows:
            writer.writerow([sample_id] + [repr(float(v)) for v in values])


def read_feature_csv(path, expected_width: int | None = None) -> dict[str, np.ndarray]:
    path = Path(path)
    out: dict[str, np.ndarray] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        width = len(header) - 1
        if expected_width is not None and width != expected_width:
            raise ValueError(f"{path}: expected {expected_width} feature columns, found {width}")
        for row in reader:
            out[row[0]] = np.array([float(v) for v in row[1:]], dtype=np.float64)
    return out


@dataclass
class FeatureStore:
    """In-memory view of the extracted features keyed by sample_id."""

    acoustic: dict[str, np.ndarray]
    embeddings: dict[str, np.ndarray]

    @classmethod
    def load(cls, directory) -> "FeatureStore":
        directory = Path(directory)
        acoustic_path = directory / ACOUSTIC_FILE
        embeddings_path = directory / EMBEDDINGS_FILE
        acoustic = (read_feature_csv(acoustic_path, len(FEATURE_NAMES))
                    if acoustic_path.exists() else {})
        embeddings = (read_feature_csv(embeddings_path, 2 * EMBED_DIM)
                      if embeddings_path.exists() else {})
        if not acoustic and not embeddings:
            raise FileNotFoundError(f"no feature files found under {directory}")
        return cls(acoustic=acoustic, embeddings=embeddings)

    def features_for(self, sample_id: str, need_acoustic: bool) -> tuple[np.ndarray | None, np.ndarray]:
        embedding = self.embeddings.get(sample_id)
        if embedding is None:
            raise KeyError(f"no embedding features for sample {sample_id!r}; "
                           f"run extraction first")
        acoustic = self.acoustic.get(sample_id)
        if need_acoustic and acoustic is None:
            raise KeyError(f"no acoustic features for sample {sample_id!r}; "
                           f"run extraction first")
        return acoustic, embedding
