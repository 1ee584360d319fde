"""Brute-force k-nearest-neighbour and Gaussian naive Bayes classifiers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DegenerateClassError, DimensionError

UNDEFINED = -1  # prediction when the posterior is NaN (unfloored naive Bayes)


def _as_2d(a):
    a = np.asarray(a, dtype=np.float64)
    return a[None, :] if a.ndim == 1 else a


@dataclass(frozen=True, eq=False)
class KnnModel:
    train: np.ndarray
    labels: np.ndarray
    k: int
    n_classes: int

    @property
    def n_features(self):
        return self.train.shape[1]


def knn_fit(matrix, labels, k: int = 5, n_classes: int | None = None) -> KnnModel:
    x = _as_2d(matrix)
    y = np.asarray(labels, dtype=np.int64)
    if x.shape[0] == 0:
        raise ValueError("empty training set")
    if y.shape != (x.shape[0],):
        raise DimensionError("labels do not match training rows")
    if not 1 <= k <= x.shape[0]:
        raise ValueError(f"k={k} must lie in [1, {x.shape[0]}]")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    return KnnModel(x, y, int(k), int(n_classes))


def _vote(neighbour_labels, n_classes):
    votes = np.bincount(neighbour_labels, minlength=n_classes)
    tied = votes == votes.max()
    # among tied classes, the one owning the nearest neighbour wins
    for lab in neighbour_labels:
        if tied[lab]:
            return int(lab)
    raise AssertionError("unreachable")


def knn_predict_batch(model: KnnModel, queries, chunk: int = 256) -> np.ndarray:
    """Majority vote of the k nearest training rows (Euclidean).

    Distance ties go to the lower training index.
    """
    q = _as_2d(queries)
    if q.shape[1] != model.n_features:
        raise DimensionError(f"query has {q.shape[1]} features, model has {model.n_features}")
    k = model.k
    out = np.empty(q.shape[0], dtype=np.int64)
    for start in range(0, q.shape[0], chunk):
        d = cdist(q[start:start + chunk], model.train, "sqeuclidean")
        kth = np.partition(d, k - 1, axis=1)[:, k - 1]
        for i, row in enumerate(d):
            cand = np.flatnonzero(row <= kth[i])
            cand = cand[np.argsort(row[cand], kind="stable")[:k]]
            out[start + i] = _vote(model.labels[cand], model.n_classes)
    return out


def knn_predict(model: KnnModel, query) -> int:
    query = np.asarray(query, dtype=np.float64)
    if query.ndim != 1:
        raise DimensionError("expected a single feature row")
    return int(knn_predict_batch(model, query)[0])


@dataclass(frozen=True, eq=False)
class NaiveBayesModel:
    priors: np.ndarray  # K
    means: np.ndarray  # K x D
    variances: np.ndarray  # K x D, floored at epsilon
    epsilon: float

    @property
    def n_features(self):
        return self.means.shape[1]


def nb_fit(matrix, labels, epsilon: float = 1e-9, n_classes: int | None = None,
           class_names=None) -> NaiveBayesModel:
    """Class priors n_c/N plus per-class Gaussian mean and population variance.

    Variances below ``epsilon`` are raised to it. ``epsilon=0`` keeps
    zero variances, which makes the densities of that class undefined.
    """
    x = _as_2d(matrix)
    y = np.asarray(labels, dtype=np.int64)
    if y.shape != (x.shape[0],):
        raise DimensionError("labels do not match training rows")
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    counts = np.bincount(y, minlength=n_classes)
    if np.any(counts == 0):
        c = int(np.flatnonzero(counts == 0)[0])
        raise DegenerateClassError(class_names[c] if class_names else c, "naive Bayes fit")
    means = np.empty((n_classes, x.shape[1]))
    variances = np.empty_like(means)
    for c in range(n_classes):
        xc = x[y == c]
        means[c] = xc.mean(axis=0)
        variances[c] = np.mean((xc - means[c]) ** 2, axis=0)
    return NaiveBayesModel(counts / counts.sum(), means, np.maximum(variances, epsilon), float(epsilon))


def nb_log_joint(model: NaiveBayesModel, queries) -> np.ndarray:
    """log prior + sum of log Gaussian densities, one column per class."""
    q = _as_2d(queries)
    if q.shape[1] != model.n_features:
        raise DimensionError(f"query has {q.shape[1]} features, model has {model.n_features}")
    out = np.empty((q.shape[0], model.priors.shape[0]))
    with np.errstate(divide="ignore", invalid="ignore"):
        for c in range(model.priors.shape[0]):
            var = model.variances[c]
            log_norm = -0.5 * np.sum(np.log(2.0 * np.pi * var))
            sq = (q - model.means[c]) ** 2 / var
            out[:, c] = np.log(model.priors[c]) + log_norm - 0.5 * np.sum(sq, axis=1)
    return out


def nb_predict_batch(model: NaiveBayesModel, queries) -> np.ndarray:
    """Arg-max class; ties to the lower id; NaN posteriors give ``UNDEFINED``."""
    scores = nb_log_joint(model, queries)
    bad = np.isnan(scores).any(axis=1)
    pred = np.argmax(np.where(np.isnan(scores), -np.inf, scores), axis=1)
    pred[bad] = UNDEFINED
    return pred


def nb_predict(model: NaiveBayesModel, query) -> int:
    query = np.asarray(query, dtype=np.float64)
    if query.ndim != 1:
        raise DimensionError("expected a single feature row")
    return int(nb_predict_batch(model, query)[0])
