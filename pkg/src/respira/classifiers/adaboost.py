"""Discrete AdaBoost over depth-1 decision stumps."""

from __future__ import annotations

import numpy as np

from ..base import ParamsMixin
from ..validation import (
    DegenerateDataError,
    check_fitted,
    check_labels,
    check_matrix,
    check_two_classes,
    check_width,
)
from ._tree import Tree, best_stump

_PERFECT_EPS = 1e-12


class AdaBoostClassifier(ParamsMixin):
    """Weighted vote of stumps; stump weight is lr * 0.5 * ln((1-eps)/eps).

    Boosting stops early on a perfect stump (it then stands alone with the
    capped weight) or when the best stump is no better than chance.
    """

    def __init__(self, n_estimators: int = 100, learning_rate: float = 1.0,
                 random_state: int = 0):
        self.n_estimators = n_estimators
        self.learning_rate = learning_rate
        self.random_state = random_state

    def fit(self, X, y):
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        X = check_matrix(X)
        y = check_labels(y, len(X))
        check_two_classes(y)
        n = len(X)
        weights = np.full(n, 1.0 / n)
        self.stumps_: list[Tree] = []
        self.stump_weights_: list[float] = []
        self.stump_errors_: list[float] = []
        for _ in range(self.n_estimators):
            stump = best_stump(X, y, weights)
            if stump is None:
                break
            predictions = stump.predict(X)
            eps = float(np.sum(weights[predictions != y]))
            if eps >= 0.5:
                break
            eps_safe = max(eps, _PERFECT_EPS)
            beta = self.learning_rate * 0.5 * np.log((1.0 - eps_safe) / eps_safe)
            self.stumps_.append(stump)
            self.stump_weights_.append(float(beta))
            self.stump_errors_.append(eps)
            if eps <= _PERFECT_EPS:
                break
            weights = weights * np.exp(-beta * y * predictions)
            weights /= weights.sum()
        if not self.stumps_:
            raise DegenerateDataError("no stump beats chance on this data")
        self.n_features_ = X.shape[1]
        return self

    def predict_score(self, X) -> np.ndarray:
        """Normalized weighted vote in [-1, 1]."""
        check_fitted(self, "stumps_")
        X = check_matrix(X)
        check_width(self, X)
        total = float(np.sum(self.stump_weights_))
        votes = np.zeros(len(X))
        for stump, beta in zip(self.stumps_, self.stump_weights_):
            votes += beta * stump.predict(X)
        return votes / total

    def predict(self, X) -> np.ndarray:
        return np.where(self.predict_score(X) >= 0.0, 1, -1)
