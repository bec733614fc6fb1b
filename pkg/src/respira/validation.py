"""Input validation helpers shared across estimators and feature code."""

from __future__ import annotations

import numpy as np


def check_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float64 array and reject non-finite entries."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {X.shape}")
    if X.shape[0] == 0:
        raise ValueError(f"{name} has no rows")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    return X


def check_labels(y, n_samples: int) -> np.ndarray:
    """Coerce labels to a -1/+1 int array of the expected length."""
    y = np.asarray(y)
    if y.ndim != 1 or len(y) != n_samples:
        raise ValueError(f"y must be 1-D with {n_samples} entries, got shape {y.shape}")
    y = y.astype(np.int64)
    values = set(np.unique(y).tolist())
    if not values <= {-1, 1}:
        raise ValueError(f"labels must be in {{-1, +1}}, got {sorted(values)}")
    return y


def check_two_classes(y) -> None:
    if len(np.unique(y)) < 2:
        raise SingleClassError("training data contains a single class")


def check_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(f"{type(estimator).__name__} is not fitted (missing {attribute})")


def check_width(estimator, X: np.ndarray) -> None:
    expected = estimator.n_features_
    if X.shape[1] != expected:
        raise ValueError(f"feature width mismatch: model expects {expected}, got {X.shape[1]}")


class NotFittedError(RuntimeError):
    """Estimator used before fit()."""


class SingleClassError(ValueError):
    """Training labels contain only one class."""


class DegenerateDataError(ValueError):
    """Data has no usable variance for the requested operation."""
