"""Feature-set assembly (F1-F4), z-scoring, and variance-targeted PCA."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .acoustic import feature_names
from .base import ParamsMixin
from .embeddings import EMBED_DIM
from .validation import DegenerateDataError, check_fitted, check_matrix

FEATURE_SETS = ("F1", "F2", "F3", "F4")
MODALITIES = ("cough", "breath", "voice")
COMBINED_MODALITY = "cough+breath"
_SCALAR_TRIO = ["dominant_period", "tempo", "duration"]


def feature_set_columns(feature_set: str) -> list[str]:
    """Acoustic registry names appended to the embedding for a feature set."""
    names = feature_names()
    if feature_set == "F1":
        return []
    if feature_set == "F2":
        return list(_SCALAR_TRIO)
    if feature_set == "F3":
        return [n for n in names if not n.startswith(("delta_", "delta2_"))]
    if feature_set == "F4":
        return list(names)
    raise ValueError(f"unknown feature set {feature_set!r}, expected one of {FEATURE_SETS}")


def feature_set_width(feature_set: str) -> int:
    """Fused width for a single modality: 1024 embedding dims plus acoustic columns."""
    return 2 * EMBED_DIM + len(feature_set_columns(feature_set))


@dataclass(frozen=True)
class FusedVector:
    values: np.ndarray
    feature_set: str
    modality: str


def fuse_single(feature_set: str, acoustic: np.ndarray | None, embedding: np.ndarray) -> np.ndarray:
    names = feature_names()
    embedding = np.asarray(embedding, dtype=np.float64)
    if embedding.shape != (2 * EMBED_DIM,):
        raise ValueError(f"embedding must have {2 * EMBED_DIM} values, got {embedding.shape}")
    columns = feature_set_columns(feature_set)
    if not columns:
        return embedding.copy()  # F1 never touches the acoustic vector
    if acoustic is None:
        raise ValueError(f"feature set {feature_set} needs the acoustic vector")
    acoustic = np.asarray(acoustic, dtype=np.float64)
    if acoustic.shape != (len(names),):
        raise ValueError(f"acoustic vector must have {len(names)} values, got {acoustic.shape}")
    index = {name: i for i, name in enumerate(names)}
    picked = acoustic[[index[c] for c in columns]]
    return np.concatenate([embedding, picked])


def assemble_features(
    feature_set: str,
    modality: str,
    inputs: Mapping[str, tuple[np.ndarray, np.ndarray]],
) -> FusedVector:
    """Build the fused vector for one sample (or cough+breath pair).

    ``inputs`` maps modality name to (acoustic vector, aggregated embedding);
    the combined modality concatenates the two per-recording fused vectors.
    """
    needed = ["cough", "breath"] if modality == COMBINED_MODALITY else [modality]
    parts = []
    for m in needed:
        if m not in inputs:
            raise ValueError(f"missing modality input: {m}")
        acoustic, embedding = inputs[m]
        parts.append(fuse_single(feature_set, acoustic, embedding))
    values = np.concatenate(parts)
    expected = feature_set_width(feature_set) * len(needed)
    assert values.shape == (expected,), (values.shape, expected)
    return FusedVector(values=values, feature_set=feature_set, modality=modality)


class Standardizer(ParamsMixin):
    """Column-wise z-scoring with statistics learned from training data only.

    Columns whose training standard deviation is below ``std_floor`` are
    treated as constant: they transform to zero on the training matrix and
    keep unit scale so unseen deviations stay bounded.
    """

    def __init__(self, std_floor: float = 1e-12):
        self.std_floor = std_floor

    def fit(self, X, y=None):
        X = check_matrix(X)
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std < self.std_floor, 1.0, std)
        self.n_features_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_fitted(self, "mean_")
        X = check_matrix(X)
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} columns, got {X.shape[1]}")
        return (X - self.mean_) / self.scale_

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X).transform(X)


class VarianceTargetPCA(ParamsMixin):
    """PCA keeping the smallest component count whose cumulative explained
    variance ratio reaches ``target_variance``."""

    def __init__(self, target_variance: float = 0.95):
        self.target_variance = target_variance

    def fit(self, X, y=None):
        if not 0.0 < self.target_variance <= 1.0:
            raise ValueError("target_variance must be in (0, 1]")
        X = check_matrix(X)
        if X.shape[0] < 2:
            raise ValueError("PCA needs at least 2 rows")
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        total = float(np.sum(s ** 2))
        if total <= 0.0:
            raise DegenerateDataError("data has zero variance; PCA undefined")
        ratios = s ** 2 / total
        cumulative = np.cumsum(ratios)
        k = 1 + int(np.searchsorted(cumulative, self.target_variance - 1e-9))
        k = min(k, len(ratios))
        components = vt[:k]
        # sign convention: largest-magnitude coefficient of each row positive
        flip = np.sign(components[np.arange(k), np.argmax(np.abs(components), axis=1)])
        flip[flip == 0] = 1.0
        self.components_ = components * flip[:, None]
        self.explained_variance_ratio_ = ratios[:k]
        self.n_components_ = k
        self.n_features_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_fitted(self, "components_")
        X = check_matrix(X)
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} columns, got {X.shape[1]}")
        return (X - self.mean_) @ self.components_.T

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X).transform(X)


def fit_standardizer(train_matrix) -> Standardizer:
    return Standardizer().fit(train_matrix)


def apply_standardizer(standardizer: Standardizer, matrix) -> np.ndarray:
    return standardizer.transform(matrix)


def fit_pca(matrix, target_variance: float) -> VarianceTargetPCA:
    return VarianceTargetPCA(target_variance=target_variance).fit(matrix)


def transform_pca(model: VarianceTargetPCA, matrix) -> np.ndarray:
    return model.transform(matrix)
