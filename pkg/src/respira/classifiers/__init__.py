"""Shallow classifiers with scoring, canonical serialization, and footprint.

Estimators follow the fit/predict + get_params protocol. Labels are -1/+1;
predict_score gives the kind-specific score (SVM margin, sigmoid probability,
vote fractions) and predict_label thresholds it at 0 for margin-style scores
and 0.5 for probability-style ones, ties going positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .adaboost import AdaBoostClassifier
from .forest import RandomForestClassifier
from .logreg import LogisticRegressionClassifier
from .serialize import (
    ModelFormatError,
    deserialize_model,
    model_kind,
    model_size,
    serialize_model,
)
from .svm import SvmClassifier

__all__ = [
    "AdaBoostClassifier", "RandomForestClassifier",
    "LogisticRegressionClassifier", "SvmClassifier",
    "SvmParams", "LogRegParams", "RfParams", "AbParams",
    "train_svm", "train_logreg", "train_rf", "train_adaboost",
    "predict_score", "predict_label", "score_threshold",
    "serialize_model", "deserialize_model", "model_size", "model_kind",
    "ModelFormatError",
]


@dataclass(frozen=True)
class SvmParams:
    C: float
    kernel: str
    gamma: float
    degree: int = 3


@dataclass(frozen=True)
class LogRegParams:
    penalty: str
    C: float


@dataclass(frozen=True)
class RfParams:
    n_estimators: int
    min_samples_split: int
    max_depth: int
    criterion: str


@dataclass(frozen=True)
class AbParams:
    n_estimators: int
    learning_rate: float


def train_svm(X, y, params: SvmParams, seed: int = 0) -> SvmClassifier:
    return SvmClassifier(C=params.C, kernel=params.kernel, gamma=params.gamma,
                         degree=params.degree, random_state=seed).fit(X, y)


def train_logreg(X, y, params: LogRegParams, seed: int = 0) -> LogisticRegressionClassifier:
    return LogisticRegressionClassifier(C=params.C, penalty=params.penalty,
                                        random_state=seed).fit(X, y)


def train_rf(X, y, params: RfParams, seed: int = 0) -> RandomForestClassifier:
    return RandomForestClassifier(
        n_estimators=params.n_estimators,
        min_samples_split=params.min_samples_split,
        max_depth=params.max_depth,
        criterion=params.criterion,
        random_state=seed,
    ).fit(X, y)


def train_adaboost(X, y, params: AbParams, seed: int = 0) -> AdaBoostClassifier:
    return AdaBoostClassifier(n_estimators=params.n_estimators,
                              learning_rate=params.learning_rate,
                              random_state=seed).fit(X, y)


def score_threshold(model) -> float:
    """Label threshold: 0 for margin scores (SVM/AB), 0.5 for vote/probability."""
    if isinstance(model, (SvmClassifier, AdaBoostClassifier)):
        return 0.0
    if isinstance(model, (LogisticRegressionClassifier, RandomForestClassifier)):
        return 0.5
    raise TypeError(f"unknown model type {type(model).__name__}")


def predict_score(model, x) -> np.ndarray | float:
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    scores = model.predict_score(x[None, :] if single else x)
    return float(scores[0]) if single else scores


def predict_label(model, x) -> np.ndarray | int:
    scores = predict_score(model, x)
    threshold = score_threshold(model)
    if np.isscalar(scores):
        return 1 if scores >= threshold else -1
    return np.where(scores >= threshold, 1, -1)
