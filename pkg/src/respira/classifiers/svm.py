"""Binary SVM trained with sequential minimal optimization on the dual."""

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

KERNELS = ("rbf", "poly", "sigmoid")


def kernel_matrix(kind: str, gamma: float, degree: int,
                  U: np.ndarray, V: np.ndarray) -> np.ndarray:
    if kind == "rbf":
        sq = (np.sum(U ** 2, axis=1)[:, None] + np.sum(V ** 2, axis=1)[None, :]
              - 2.0 * U @ V.T)
        return np.exp(-gamma * np.maximum(sq, 0.0))
    if kind == "poly":
        return (gamma * (U @ V.T) + 1.0) ** degree
    if kind == "sigmoid":
        return np.tanh(gamma * (U @ V.T) + 1.0)
    raise ValueError(f"unknown kernel {kind!r}, expected one of {KERNELS}")


class SvmClassifier(ParamsMixin):
    """Kernel SVM fitted by Platt's SMO with an error cache and the
    second-choice heuristic. Deterministic: candidate scans run in index
    order, so identical inputs give identical models."""

    def __init__(self, C: float = 1.0, kernel: str = "rbf", gamma: float = 1.0,
                 degree: int = 3, tol: float = 1e-3, random_state: int = 0):
        self.C = C
        self.kernel = kernel
        self.gamma = gamma
        self.degree = degree
        self.tol = tol
        self.random_state = random_state

    def _validate_params(self):
        if self.C <= 0:
            raise ValueError("C must be positive")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.kernel not in KERNELS:
            raise ValueError(f"kernel must be one of {KERNELS}")
        if self.kernel == "poly" and not 2 <= self.degree <= 5:
            raise ValueError("poly degree must be in [2, 5]")

    def fit(self, X, y):
        self._validate_params()
        X = check_matrix(X)
        y = check_labels(y, len(X))
        check_two_classes(y)
        n = len(X)
        K = kernel_matrix(self.kernel, self.gamma, self.degree, X, X)
        yf = y.astype(np.float64)
        alphas = np.zeros(n)
        self._state = state = _SmoState(K=K, y=yf, C=float(self.C),
                                        tol=float(self.tol), alphas=alphas)
        state.solve(max_passes=10 * n)
        support = state.alphas > 1e-12
        self.support_vectors_ = X[support]
        self.dual_coef_ = (state.alphas * yf)[support]
        self.intercept_ = state.b
        self.n_features_ = X.shape[1]
        self.n_iter_ = state.passes
        del self._state
        return self

    def decision_function(self, X) -> np.ndarray:
        check_fitted(self, "support_vectors_")
        X = check_matrix(X)
        check_width(self, X)
        K = kernel_matrix(self.kernel, self.gamma, self.degree,
                          self.support_vectors_, X)
        return self.dual_coef_ @ K + self.intercept_

    def predict_score(self, X) -> np.ndarray:
        return self.decision_function(X)

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0.0, 1, -1)


class _SmoState:
    """Working-set state for one SMO run (Platt 1998 structure)."""

    def __init__(self, K, y, C, tol, alphas):
        self.K = K
        self.y = y
        self.C = C
        self.tol = tol
        self.alphas = alphas
        self.b = 0.0
        self.errors = -y.copy()  # f(x) - y with all alphas zero
        self.passes = 0

    def solve(self, max_passes: int):
        examine_all = True
        while self.passes < max_passes:
            changed = 0
            if examine_all:
                targets = range(len(self.y))
            else:
                targets = np.flatnonzero((self.alphas > 0) & (self.alphas < self.C))
            for i2 in targets:
                changed += self._examine(int(i2))
            self.passes += 1
            if examine_all:
                if changed == 0:
                    return
                examine_all = False
            elif changed == 0:
                examine_all = True

    def _examine(self, i2: int) -> int:
        y2, a2, e2 = self.y[i2], self.alphas[i2], self.errors[i2]
        r2 = e2 * y2
        violates = (r2 < -self.tol and a2 < self.C) or (r2 > self.tol and a2 > 0)
        if not violates:
            return 0
        non_bound = np.flatnonzero((self.alphas > 0) & (self.alphas < self.C))
        if len(non_bound) > 1:
            gaps = np.abs(self.errors[non_bound] - e2)
            i1 = int(non_bound[np.argmax(gaps)])
            if self._step(i1, i2):
                return 1
        for i1 in non_bound:
            if self._step(int(i1), i2):
                return 1
        for i1 in range(len(self.y)):
            if self._step(i1, i2):
                return 1
        return 0

    def _step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        a1, a2 = self.alphas[i1], self.alphas[i2]
        y1, y2 = self.y[i1], self.y[i2]
        e1, e2 = self.errors[i1], self.errors[i2]
        s = y1 * y2
        if s > 0:
            low, high = max(0.0, a1 + a2 - self.C), min(self.C, a1 + a2)
        else:
            low, high = max(0.0, a2 - a1), min(self.C, self.C + a2 - a1)
        if low >= high:
            return False
        k11, k12, k22 = self.K[i1, i1], self.K[i1, i2], self.K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = np.clip(a2 + y2 * (e1 - e2) / eta, low, high)
        else:
            # non-PSD kernel: objective is linear/concave along the segment,
            # evaluate both ends
            f1 = y1 * e1 - a1 * k11 - s * a2 * k12
            f2 = y2 * e2 - s * a1 * k12 - a2 * k22
            l1, h1 = a1 + s * (a2 - low), a1 + s * (a2 - high)
            obj_low = (l1 * f1 + low * f2 + 0.5 * l1 ** 2 * k11
                       + 0.5 * low ** 2 * k22 + s * low * l1 * k12)
            obj_high = (h1 * f1 + high * f2 + 0.5 * h1 ** 2 * k11
                        + 0.5 * high ** 2 * k22 + s * high * h1 * k12)
            if obj_low < obj_high - 1e-12:
                a2_new = low
            elif obj_high < obj_low - 1e-12:
                a2_new = high
            else:
                return False
        if abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12):
            return False
        a1_new = a1 + s * (a2 - a2_new)
        d1, d2 = a1_new - a1, a2_new - a2
        b1 = self.b - e1 - y1 * d1 * k11 - y2 * d2 * k12
        b2 = self.b - e2 - y1 * d1 * k12 - y2 * d2 * k22
        if 0 < a1_new < self.C:
            b_new = b1
        elif 0 < a2_new < self.C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        self.errors += (y1 * d1 * self.K[i1] + y2 * d2 * self.K[i2]
                        + (b_new - self.b))
        self.b = b_new
        self.alphas[i1], self.alphas[i2] = a1_new, a2_new
        return True
