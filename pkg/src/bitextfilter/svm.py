"""Soft-margin RBF-kernel SVM trained with sequential minimal optimization.

Deliberately small: binary labels in {-1, +1}, a precomputed kernel matrix,
and Platt-style alternation between full sweeps and non-bound sweeps.  The
second index of each working pair is chosen by the largest error difference,
which keeps training fully deterministic.  Weak ensemble members tolerate
loose convergence, so the default tolerance is coarse and the number of
optimization steps is capped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """exp(-gamma * ||a_i - b_j||^2) for all row pairs, in float64."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    sq = (
        (a * a).sum(axis=1)[:, None]
        + (b * b).sum(axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


@dataclass
class SVMModel:
    """Trained classifier: support vectors, dual coefficients (alpha*y), bias."""

    support_vectors: np.ndarray
    dual_coef: np.ndarray
    bias: float
    gamma: float

    def decision_function(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if self.support_vectors.shape[0] == 0:
            return np.full(x.shape[0], self.bias)
        k = rbf_kernel(x, self.support_vectors, self.gamma)
        return k @ self.dual_coef + self.bias


def train_svm(
    x: np.ndarray,
    y: np.ndarray,
    gamma: float,
    c: float = 1.0,
    tol: float = 1e-3,
    max_steps: int | None = None,
) -> SVMModel:
    """Fit the dual problem with SMO; ``max_steps`` defaults to 10 * n_samples."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        raise DataError("need at least two training samples")
    if not np.all(np.abs(y) == 1.0):
        raise DataError("labels must be -1 or +1")
    if max_steps is None:
        max_steps = 10 * n

    kernel = rbf_kernel(x, x, gamma)
    alpha = np.zeros(n)
    bias = 0.0
    # errors[i] = decision(x_i) - y_i, kept incrementally up to date
    errors = -y.copy()
    steps = 0

    def take_step(i: int, j: int) -> bool:
        nonlocal bias, errors
        if i == j:
            return False
        ai, aj = alpha[i], alpha[j]
        yi, yj = y[i], y[j]
        if yi == yj:
            lo, hi = max(0.0, ai + aj - c), min(c, ai + aj)
        else:
            lo, hi = max(0.0, aj - ai), min(c, c + aj - ai)
        if lo >= hi:
            return False
        eta = kernel[i, i] + kernel[j, j] - 2.0 * kernel[i, j]
        if eta <= 0.0:
            return False
        aj_new = aj + yj * (errors[i] - errors[j]) / eta
        aj_new = min(hi, max(lo, aj_new))
        if abs(aj_new - aj) < 1e-12:
            return False
        ai_new = ai + yi * yj * (aj - aj_new)
        di, dj = ai_new - ai, aj_new - aj

        b1 = bias - errors[i] - yi * di * kernel[i, i] - yj * dj * kernel[i, j]
        b2 = bias - errors[j] - yi * di * kernel[i, j] - yj * dj * kernel[j, j]
        if 0.0 < ai_new < c:
            b_new = b1
        elif 0.0 < aj_new < c:
            b_new = b2
        else:
            b_new = (b1 + b2) / 2.0

        errors_delta = yi * di * kernel[i] + yj * dj * kernel[j] + (b_new - bias)
        errors += errors_delta
        alpha[i] = ai_new
        alpha[j] = aj_new
        bias = b_new
        return True

    def examine(i: int) -> bool:
        r = errors[i] * y[i]
        if (r < -tol and alpha[i] < c) or (r > tol and alpha[i] > 0.0):
            # second-choice heuristic first, then a deterministic scan so a
            # failed step never stalls an otherwise solvable violation
            j = int(np.argmax(np.abs(errors - errors[i])))
            if take_step(i, j):
                return True
            for offset in range(1, n):
                if take_step(i, (i + offset) % n):
                    return True
        return False

    examine_all = True
    while steps < max_steps:
        changed = 0
        if examine_all:
            candidates = range(n)
        else:
            candidates = np.flatnonzero((alpha > 0.0) & (alpha < c))
        for i in candidates:
            if examine(int(i)):
                changed += 1
                steps += 1
                if steps >= max_steps:
                    break
        if changed == 0:
            if examine_all:
                break
            examine_all = True
        else:
            examine_all = False

    support = alpha > 1e-8
    return SVMModel(
        support_vectors=x[support].copy(),
        dual_coef=(alpha * y)[support].copy(),
        bias=bias,
        gamma=gamma,
    )
