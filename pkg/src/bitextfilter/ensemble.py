"""Positive-unlabeled bagging ensemble over per-pair score features.

Positives come from the clean parallel data, unlabeled rows from the noisy
set.  Each of the (by default) 100 weak learners is an RBF-kernel SVM trained
on all positives plus a random sample of unlabeled rows treated as negatives,
twice as many unlabeled rows as positives, on a random half of the feature
columns.  The ensemble score of a row is the fraction of learners whose
decision value is positive.

A second training round rescoring the data with the first-round ensemble and
relabeling the top rows as positives (keeping the original positive count) is
supported; more rounds are rejected because quality degrades beyond two.

Determinism: every learner's random draws come from a generator seeded with
(master seed, iteration, learner index), and feature subsets are sampled over
name-sorted column positions so column order never changes the model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .svm import SVMModel, train_svm

MODEL_FORMAT_VERSION = 1
DEFAULT_LEARNERS = 100
DEFAULT_BIAS_RATIO = 2.0
MAX_ITERATIONS = 2

POSITIVE = "positive"
UNLABELED = "unlabeled"


@dataclass(frozen=True)
class FeatureMatrix:
    """Rows of float64 features with positive/unlabeled labels."""

    values: np.ndarray
    feature_names: tuple[str, ...]
    positive: np.ndarray  # boolean mask, True = positive row

    def __post_init__(self):
        v = self.values
        if v.ndim != 2:
            raise DataError("feature matrix must be 2-d")
        if np.isnan(v).any():
            r, c = map(int, np.argwhere(np.isnan(v))[0])
            raise DataError(f"NaN feature at row {r}, column {self.feature_names[c]!r}")
        if len(self.feature_names) != v.shape[1]:
            raise DataError("feature_names length != feature count")
        if len(set(self.feature_names)) != len(self.feature_names):
            raise DataError("duplicate feature names")
        if self.positive.shape != (v.shape[0],):
            raise DataError("label mask length != row count")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class WeakLearner:
    """One bagged SVM: the feature columns it sees and its trained parameters."""

    feature_mask: tuple[int, ...]  # column indices, in name-sorted order
    model: SVMModel
    train_seed: int


@dataclass(frozen=True)
class EnsembleModel:
    learners: tuple[WeakLearner, ...]
    feature_names: tuple[str, ...]
    means: np.ndarray
    stds: np.ndarray  # 1.0 where the feature is constant
    constant: np.ndarray  # boolean mask of constant features
    iteration: int
    master_seed: int
    bias_ratio: float

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def standardize(self, rows: np.ndarray) -> np.ndarray:
        return (rows - self.means) / self.stds


def _standardization(values: np.ndarray):
    means = values.mean(axis=0)
    stds = values.std(axis=0)
    constant = stds == 0.0
    stds = np.where(constant, 1.0, stds)
    return means, stds, constant


def _learner_rng(master_seed: int, iteration: int, index: int) -> np.random.Generator:
    return np.random.default_rng([master_seed, iteration, index])


def _mask_size(n_features: int) -> int:
    return max(1, math.ceil(n_features / 2))


def pu_train(
    features: FeatureMatrix,
    n_learners: int = DEFAULT_LEARNERS,
    bias_ratio: float = DEFAULT_BIAS_RATIO,
    seed: int = 0,
    iteration: int = 1,
) -> EnsembleModel:
    """Train the bagged PU ensemble on positive + unlabeled rows."""
    if n_learners < 1:
        raise ConfigError("n_learners must be >= 1")
    if bias_ratio <= 0:
        raise ConfigError("bias_ratio must be positive")
    if seed < 0:
        raise ConfigError("seed must be non-negative")
    pos_rows = np.flatnonzero(features.positive)
    unl_rows = np.flatnonzero(~features.positive)
    if len(pos_rows) == 0:
        raise DataError("no positive rows to train on")
    if len(unl_rows) == 0:
        raise DataError("no unlabeled rows to train on")

    # everything numeric runs over the name-sorted column layout: permuting
    # the input columns (with their names) then reproduces the exact same
    # buffers, hence bit-identical reductions, models and scores
    name_order = np.array(
        sorted(range(features.n_features), key=lambda i: features.feature_names[i]),
        dtype=np.int64,
    )
    canon_values = np.ascontiguousarray(features.values[:, name_order])
    canon_means, canon_stds, canon_constant = _standardization(canon_values)
    if canon_constant.all():
        raise DataError("all features are constant")
    standardized = (canon_values - canon_means) / canon_stds
    inverse = np.empty_like(name_order)
    inverse[name_order] = np.arange(features.n_features)

    n_pos = len(pos_rows)
    n_neg = math.ceil(bias_ratio * n_pos)
    m = _mask_size(features.n_features)

    learners = []
    for idx in range(n_learners):
        rng = _learner_rng(seed, iteration, idx)
        mask_positions = np.sort(rng.choice(features.n_features, size=m, replace=False))
        mask = tuple(int(c) for c in name_order[mask_positions])
        replace = n_neg > len(unl_rows)
        sampled = unl_rows[rng.choice(len(unl_rows), size=n_neg, replace=replace)]

        train_rows = np.concatenate([pos_rows, sampled])
        x = standardized[np.ix_(train_rows, mask_positions)]
        y = np.concatenate([np.ones(n_pos), -np.ones(n_neg)])
        pooled_var = float(x.var())
        gamma = 1.0 / (m * pooled_var) if pooled_var > 0.0 else 1.0
        model = train_svm(x, y, gamma=gamma, c=1.0, tol=1e-3)
        learners.append(WeakLearner(feature_mask=mask, model=model, train_seed=idx))

    return EnsembleModel(
        learners=tuple(learners),
        feature_names=features.feature_names,
        means=canon_means[inverse],
        stds=canon_stds[inverse],
        constant=canon_constant[inverse],
        iteration=iteration,
        master_seed=seed,
        bias_ratio=bias_ratio,
    )


def ensemble_score_many(model: EnsembleModel, rows: np.ndarray) -> np.ndarray:
    """Vote fraction in [0, 1] for each feature row."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if rows.shape[1] != model.n_features:
        raise DataError(
            f"row has {rows.shape[1]} features, model expects {model.n_features}"
        )
    standardized = model.standardize(rows)
    votes = np.zeros(rows.shape[0], dtype=np.int64)
    for learner in model.learners:
        cols = np.array(learner.feature_mask, dtype=np.int64)
        decisions = learner.model.decision_function(standardized[:, cols])
        votes += decisions > 0.0
    return votes / len(model.learners)


def ensemble_score(model: EnsembleModel, row) -> float:
    """Vote fraction for a single feature row."""
    return float(ensemble_score_many(model, np.asarray(row, dtype=np.float64))[0])


def pu_iterate(features: FeatureMatrix, model_iter1: EnsembleModel) -> EnsembleModel:
    """Second (final) training round after rank-based relabeling.

    All rows are rescored by the first-round ensemble; the top ``n_pos`` rows
    (ties by ascending row index) become the new positives, preserving the
    original positive count, and the ensemble is retrained from scratch.
    """
    if model_iter1.iteration != 1:
        raise ConfigError(
            f"relabeling starts from an iteration-1 model, got iteration "
            f"{model_iter1.iteration}; training stops after {MAX_ITERATIONS} iterations"
        )
    if tuple(model_iter1.feature_names) != tuple(features.feature_names):
        raise ConfigError("feature schema differs from the trained model")
    n_pos = int(features.positive.sum())
    scores = ensemble_score_many(model_iter1, features.values)
    order = np.lexsort((np.arange(features.n_rows), -scores))
    relabeled = np.zeros(features.n_rows, dtype=bool)
    relabeled[order[:n_pos]] = True
    features2 = FeatureMatrix(
        values=features.values,
        feature_names=features.feature_names,
        positive=relabeled,
    )
    return pu_train(
        features2,
        n_learners=len(model_iter1.learners),
        bias_ratio=model_iter1.bias_ratio,
        seed=model_iter1.master_seed,
        iteration=2,
    )


def save_model(model: EnsembleModel, path) -> None:
    """Persist the ensemble as a versioned npz container."""
    arrays = {
        "format_version": np.array([MODEL_FORMAT_VERSION], dtype=np.int64),
        "iteration": np.array([model.iteration], dtype=np.int64),
        "master_seed": np.array([model.master_seed], dtype=np.int64),
        "bias_ratio": np.array([model.bias_ratio], dtype=np.float64),
        "n_learners": np.array([len(model.learners)], dtype=np.int64),
        "feature_names": np.array(model.feature_names, dtype=np.str_),
        "means": model.means,
        "stds": model.stds,
        "constant": model.constant,
    }
    for i, learner in enumerate(model.learners):
        arrays[f"learner_{i}_mask"] = np.array(learner.feature_mask, dtype=np.int64)
        arrays[f"learner_{i}_sv"] = learner.model.support_vectors
        arrays[f"learner_{i}_coef"] = learner.model.dual_coef
        arrays[f"learner_{i}_scalars"] = np.array(
            [learner.model.bias, learner.model.gamma, learner.train_seed],
            dtype=np.float64,
        )
    with open(path, "wb") as fh:
        np.savez_compressed(fh, **arrays)


def load_model(path) -> EnsembleModel:
    with np.load(path, allow_pickle=False) as data:
        version = int(data["format_version"][0])
        if version != MODEL_FORMAT_VERSION:
            raise DataError(
                f"{path}: model format version {version} unsupported "
                f"(expected {MODEL_FORMAT_VERSION})"
            )
        learners = []
        for i in range(int(data["n_learners"][0])):
            bias, gamma, train_seed = data[f"learner_{i}_scalars"]
            learners.append(
                WeakLearner(
                    feature_mask=tuple(int(c) for c in data[f"learner_{i}_mask"]),
                    model=SVMModel(
                        support_vectors=data[f"learner_{i}_sv"],
                        dual_coef=data[f"learner_{i}_coef"],
                        bias=float(bias),
                        gamma=float(gamma),
                    ),
                    train_seed=int(train_seed),
                )
            )
        return EnsembleModel(
            learners=tuple(learners),
            feature_names=tuple(str(n) for n in data["feature_names"]),
            means=data["means"],
            stds=data["stds"],
            constant=data["constant"],
            iteration=int(data["iteration"][0]),
            master_seed=int(data["master_seed"][0]),
            bias_ratio=float(data["bias_ratio"][0]),
        )
