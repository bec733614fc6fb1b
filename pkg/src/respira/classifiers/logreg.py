"""L1/L2-regularized logistic regression via monotone proximal gradient."""

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

PENALTIES = ("l1", "l2")


def _log_loss(margins: np.ndarray) -> float:
    # sum log(1 + exp(-m)), stable for large |m|
    return float(np.sum(np.logaddexp(0.0, -margins)))


class LogisticRegressionClassifier(ParamsMixin):
    """Minimizes R(w)/C + sum log(1+exp(-y (Xw+b))) with unpenalized bias.

    R is ||w||_1 or ||w||^2/2. The solver is ISTA with backtracking line
    search, so the recorded objective history is non-increasing; L1 steps
    soft-threshold, producing exact zeros.
    """

    def __init__(self, C: float = 1.0, penalty: str = "l2",
                 max_iter: int = 5000, tol: float = 1e-8, random_state: int = 0):
        self.C = C
        self.penalty = penalty
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def _objective(self, X, y, w, b) -> float:
        margins = y * (X @ w + b)
        reg = 1.0 / self.C
        if self.penalty == "l1":
            penalty = reg * np.sum(np.abs(w))
        else:
            penalty = 0.5 * reg * float(w @ w)
        return _log_loss(margins) + penalty

    def fit(self, X, y):
        if self.C <= 0:
            raise ValueError("C must be positive")
        if self.penalty not in PENALTIES:
            raise ValueError(f"penalty must be one of {PENALTIES}")
        X = check_matrix(X)
        y = check_labels(y, len(X)).astype(np.float64)
        check_two_classes(y)
        n, d = X.shape
        reg = 1.0 / self.C
        w = np.zeros(d)
        b = 0.0
        # conservative Lipschitz bound for the logistic loss (bias included);
        # backtracking and step growth adapt from there
        step = 1.0 / max(1.0, 0.25 * (np.linalg.norm(X, ord="fro") ** 2 + n))
        objective = self._objective(X, y, w, b)
        history = [objective]
        for _ in range(self.max_iter):
            margins = y * (X @ w + b)
            residual = y * _sigmoid(-margins)  # d(loss)/d(margin) folded with y
            grad_w = -(X.T @ residual)
            grad_b = -float(np.sum(residual))
            if self.penalty == "l2":
                grad_w = grad_w + reg * w
            accepted = False
            while step > 1e-18:
                w_new = w - step * grad_w
                if self.penalty == "l1":
                    w_new = np.sign(w_new) * np.maximum(np.abs(w_new) - step * reg, 0.0)
                b_new = b - step * grad_b
                value = self._objective(X, y, w_new, b_new)
                if value <= objective:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
            decrease = objective - value
            w, b, objective = w_new, b_new, value
            history.append(objective)
            step *= 1.25
            if decrease < self.tol:
                break
        self.coef_ = w
        self.intercept_ = float(b)
        self.objective_history_ = np.array(history)
        self.n_iter_ = len(history) - 1
        self.n_features_ = d
        return self

    def decision_function(self, X) -> np.ndarray:
        check_fitted(self, "coef_")
        X = check_matrix(X)
        check_width(self, X)
        return X @ self.coef_ + self.intercept_

    def predict_score(self, X) -> np.ndarray:
        return _sigmoid(self.decision_function(X))

    def predict(self, X) -> np.ndarray:
        return np.where(self.predict_score(X) >= 0.5, 1, -1)

    def gradient_norm(self, X, y) -> float:
        """Norm of the smooth-objective gradient at the fitted point (l2 case)."""
        X = check_matrix(X)
        y = check_labels(y, len(X)).astype(np.float64)
        margins = y * (X @ self.coef_ + self.intercept_)
        residual = y * _sigmoid(-margins)
        grad_w = -(X.T @ residual)
        if self.penalty == "l2":
            grad_w = grad_w + self.coef_ / self.C
        grad_b = -float(np.sum(residual))
        return float(np.sqrt(np.sum(grad_w ** 2) + grad_b ** 2))


def _sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    positive = z >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-z[positive]))
    expz = np.exp(z[~positive])
    out[~positive] = expz / (1.0 + expz)
    return out
