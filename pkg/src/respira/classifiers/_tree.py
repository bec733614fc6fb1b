"""Flat-array binary decision trees shared by the forest and boosting models."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

LEAF = -1


@dataclass
class Tree:
    """Nodes in preorder: feature < 0 marks a leaf carrying leaf_label (-1/+1)."""

    feature: np.ndarray    # int32
    threshold: np.ndarray  # float64
    left: np.ndarray       # int32 child index
    right: np.ndarray      # int32 child index
    leaf_label: np.ndarray  # int8: -1/+1 at leaves, 0 at internal nodes

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X), dtype=np.int64)
        for i, x in enumerate(X):
            node = 0
            while self.feature[node] != LEAF:
                if x[self.feature[node]] <= self.threshold[node]:
                    node = self.left[node]
                else:
                    node = self.right[node]
            out[i] = self.leaf_label[node]
        return out


class _TreeBuilder:
    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.leaf_label: list[int] = []

    def add_leaf(self, label: int) -> int:
        node = len(self.feature)
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.leaf_label.append(label)
        return node

    def add_internal(self, feature: int, threshold: float) -> int:
        node = len(self.feature)
        self.feature.append(feature)
        self.threshold.append(threshold)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.leaf_label.append(0)
        return node

    def finish(self) -> Tree:
        return Tree(
            feature=np.array(self.feature, dtype=np.int32),
            threshold=np.array(self.threshold, dtype=np.float64),
            left=np.array(self.left, dtype=np.int32),
            right=np.array(self.right, dtype=np.int32),
            leaf_label=np.array(self.leaf_label, dtype=np.int8),
        )


def _impurity(n_pos: np.ndarray, n: np.ndarray, criterion: str) -> np.ndarray:
    """Gini or entropy of the positive fraction; 0 where n == 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(n > 0, n_pos / np.maximum(n, 1), 0.0)
        if criterion == "gini":
            value = 1.0 - p ** 2 - (1.0 - p) ** 2
        else:  # entropy
            value = -np.where(p > 0, p * np.log2(np.maximum(p, 1e-300)), 0.0) \
                    - np.where(p < 1, (1 - p) * np.log2(np.maximum(1 - p, 1e-300)), 0.0)
    return np.where(n > 0, value, 0.0)


def _best_split_on_feature(values: np.ndarray, y: np.ndarray, criterion: str):
    """Minimal weighted child impurity over midpoints of distinct sorted values.

    Returns (cost, threshold) or None when the feature is constant. Scanning
    in ascending order with strict improvement keeps the smaller threshold on
    cost ties.
    """
    order = np.argsort(values, kind="stable")
    v, labels = values[order], y[order]
    n = len(v)
    boundary = np.flatnonzero(v[:-1] < v[1:])  # split after position i
    if len(boundary) == 0:
        return None
    pos_prefix = np.cumsum(labels == 1)
    n_left = boundary + 1
    pos_left = pos_prefix[boundary]
    n_right = n - n_left
    pos_right = pos_prefix[-1] - pos_left
    cost = (n_left * _impurity(pos_left, n_left, criterion)
            + n_right * _impurity(pos_right, n_right, criterion)) / n
    best = int(np.argmin(cost))  # argmin takes the first (smallest threshold) on ties
    threshold = 0.5 * (v[boundary[best]] + v[boundary[best] + 1])
    return float(cost[best]), threshold


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    rng: np.random.Generator,
    max_depth: int,
    min_samples_split: int,
    criterion: str,
    max_features: int,
) -> Tree:
    """CART growth on -1/+1 labels; class ties in leaves resolve to -1."""
    builder = _TreeBuilder()

    def majority(labels: np.ndarray) -> int:
        return 1 if np.sum(labels == 1) > np.sum(labels == -1) else -1

    def build(indices: np.ndarray, depth: int) -> int:
        labels = y[indices]
        n_pos = int(np.sum(labels == 1))
        if (depth >= max_depth or len(indices) < min_samples_split
                or n_pos == 0 or n_pos == len(indices)):
            return builder.add_leaf(majority(labels))
        candidates = np.sort(rng.choice(X.shape[1], size=max_features, replace=False))
        parent = float(_impurity(np.array([n_pos]), np.array([len(indices)]), criterion)[0])
        best = None
        for f in candidates:
            found = _best_split_on_feature(X[indices, f], labels, criterion)
            if found is None:
                continue
            cost, threshold = found
            if best is None or cost < best[0]:
                best = (cost, int(f), threshold)
        if best is None or best[0] >= parent:
            return builder.add_leaf(majority(labels))
        cost, f, threshold = best
        node = builder.add_internal(f, threshold)
        goes_left = X[indices, f] <= threshold
        builder.left[node] = build(indices[goes_left], depth + 1)
        builder.right[node] = build(indices[~goes_left], depth + 1)
        return node

    build(np.arange(len(y)), 0)
    return builder.finish()


def best_stump(X: np.ndarray, y: np.ndarray, weights: np.ndarray) -> Tree | None:
    """Depth-1 tree minimizing weighted misclassification over all features,
    midpoints, and leaf polarities. None when every feature is constant."""
    best = None  # (error, feature, threshold, left_label)
    total_pos = float(np.sum(weights[y == 1]))
    total = float(np.sum(weights))
    for f in range(X.shape[1]):
        values = X[:, f]
        order = np.argsort(values, kind="stable")
        v = values[order]
        w_pos = np.where(y[order] == 1, weights[order], 0.0)
        w_all = weights[order]
        boundary = np.flatnonzero(v[:-1] < v[1:])
        if len(boundary) == 0:
            continue
        pos_left = np.cumsum(w_pos)[boundary]
        sum_left = np.cumsum(w_all)[boundary]
        # left leaf predicts +1: errors are negatives on the left, positives right
        err_left_pos = (sum_left - pos_left) + (total_pos - pos_left)
        # left leaf predicts -1: complementary assignment
        err_left_neg = total - err_left_pos
        for errors, left_label in ((err_left_pos, 1), (err_left_neg, -1)):
            i = int(np.argmin(errors))
            err = float(errors[i])
            if best is None or err < best[0] - 1e-15:
                threshold = 0.5 * (v[boundary[i]] + v[boundary[i] + 1])
                best = (err, f, threshold, left_label)
    if best is None:
        return None
    _, f, threshold, left_label = best
    builder = _TreeBuilder()
    node = builder.add_internal(f, threshold)
    builder.left[node] = builder.add_leaf(left_label)
    builder.right[node] = builder.add_leaf(-left_label)
    return builder.finish()
