"""Random forest of CART trees on bootstrap samples."""

from __future__ import annotations

import numpy as np

from ..base import ParamsMixin
from ..validation import (
    check_fitted,
    check_labels,
    check_matrix,
    check_two_classes,
    check_width,
)
from ._tree import Tree, grow_tree

CRITERIA = ("entropy", "gini")


class RandomForestClassifier(ParamsMixin):
    """Bagged CART ensemble; sqrt(d) features are considered per split.

    Each tree draws its own generator from (random_state, tree index), so the
    forest is reproducible regardless of how tree training is scheduled.
    """

    def __init__(self, n_estimators: int = 100, min_samples_split: int = 2,
                 max_depth: int = 10, criterion: str = "gini",
                 random_state: int = 0):
        self.n_estimators = n_estimators
        self.min_samples_split = min_samples_split
        self.max_depth = max_depth
        self.criterion = criterion
        self.random_state = random_state

    def _validate_params(self):
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be positive")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")
        if self.max_depth < 1:
            raise ValueError("max_depth must be positive")
        if self.criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}")

    def fit(self, X, y):
        self._validate_params()
        X = check_matrix(X)
        y = check_labels(y, len(X))
        check_two_classes(y)
        n, d = X.shape
        max_features = max(1, int(np.sqrt(d)))
        self.trees_ = []
        for t in range(self.n_estimators):
            rng = np.random.default_rng([self.random_state, t])
            sample = rng.integers(0, n, size=n)
            self.trees_.append(grow_tree(
                X[sample], y[sample], rng,
                max_depth=self.max_depth,
                min_samples_split=self.min_samples_split,
                criterion=self.criterion,
                max_features=max_features,
            ))
        self.n_features_ = d
        return self

    def predict_score(self, X) -> np.ndarray:
        """Fraction of trees voting positive, in [0, 1]."""
        check_fitted(self, "trees_")
        X = check_matrix(X)
        check_width(self, X)
        votes = np.stack([tree.predict(X) for tree in self.trees_])
        return np.mean(votes == 1, axis=0)

    def predict(self, X) -> np.ndarray:
        return np.where(self.predict_score(X) >= 0.5, 1, -1)
