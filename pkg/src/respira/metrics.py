"""Ranking and thresholded classification metrics."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata


def auc(scores, labels) -> float:
    """Mann-Whitney AUC from score ranks; tied scores count one half.

    Equals the fraction of (positive, negative) pairs where the positive
    outranks the negative.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    positives = labels == 1
    n_pos = int(np.sum(positives))
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes present")
    ranks = rankdata(scores, method="average")
    u = float(np.sum(ranks[positives])) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def precision(predictions, labels) -> float:
    """TP / (TP + FP); defined as 1.0 when nothing was predicted positive."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    predicted_pos = predictions == 1
    if not np.any(predicted_pos):
        return 1.0
    return float(np.sum(labels[predicted_pos] == 1) / np.sum(predicted_pos))


def precision_is_degenerate(predictions) -> bool:
    """True when no positive predictions exist (precision fell back to 1.0)."""
    return not np.any(np.asarray(predictions) == 1)


def recall(predictions, labels) -> float:
    """TP / (TP + FN)."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    actual_pos = labels == 1
    if not np.any(actual_pos):
        raise ValueError("recall needs at least one positive label")
    return float(np.sum(predictions[actual_pos] == 1) / np.sum(actual_pos))
