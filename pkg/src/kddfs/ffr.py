"""Fast feature reduction: rank features by the variance of their class means."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass

import numpy as np

from .clustering import SelectionResult
from .dataset import LabeledDataset, apply_minmax, fit_minmax
from .errors import DegenerateClassError


@dataclass(frozen=True, eq=False)
class ClassMeanTable:
    values: np.ndarray  # K x D
    class_counts: np.ndarray  # K

    @property
    def n_classes(self):
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class FfrScores:
    scores: np.ndarray  # D, variance of the class means
    centers: np.ndarray  # D, mean of the class means


def class_means(values, labels=None, n_classes=None, class_names=None) -> ClassMeanTable:
    """Per-class, per-feature arithmetic means.

    Every class in ``range(n_classes)`` must have at least one sample.
    """
    if isinstance(values, LabeledDataset):
        ds = values
        values, labels, n_classes, class_names = ds.values, ds.labels, ds.n_classes, ds.categories
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels)
    if n_classes is None:
        n_classes = int(labels.max()) + 1
    counts = np.bincount(labels, minlength=n_classes)
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        c = int(empty[0])
        raise DegenerateClassError(class_names[c] if class_names else c, "class means")
    # one-hot sums through a single matrix product
    onehot = (labels[None, :] == np.arange(n_classes)[:, None]).astype(np.float64)
    sums = onehot @ values
    return ClassMeanTable(sums / counts[:, None], counts)


def ffr_scores(table: ClassMeanTable) -> FfrScores:
    """Population variance over the K class means of each feature."""
    if table.n_classes < 2:
        raise ValueError("need at least two classes to score features")
    s = table.values
    mu = s.mean(axis=0)
    return FfrScores(np.mean((s - mu) ** 2, axis=0), mu)


def select_top_t(scores, t: int):
    """Indices of the ``t`` largest scores, descending; ties go to the lower index."""
    scores = np.asarray(scores.scores if isinstance(scores, FfrScores) else scores, dtype=np.float64)
    if not 1 <= t <= scores.shape[0]:
        raise ValueError(f"t={t} outside [1, {scores.shape[0]}]")
    order = np.lexsort((np.arange(scores.shape[0]), -scores))
    return [int(i) for i in order[:t]]


def ffr_select(dataset: LabeledDataset, t: int, normalize: bool = True) -> SelectionResult:
    """Keep the ``t`` features whose class means are most spread out.

    With ``normalize`` the data is min-max scaled over the given rows first;
    that step is not included in ``elapsed_seconds``.
    """
    if normalize:
        dataset = apply_minmax(dataset, fit_minmax(dataset))
    t0 = time.perf_counter()
    table = class_means(dataset)
    scores = ffr_scores(table)
    kept = select_top_t(scores, t)
    elapsed = time.perf_counter() - t0
    return SelectionResult(
        tuple(kept), scores.scores, elapsed, "ffr", dataset.feature_names,
        {"normalize": normalize, "class_means": table.values.tolist()},
    )


def dump_scores(result: SelectionResult, path, categories=()):
    """CSV of (index, name, per-class means, score) for an FFR selection."""
    means = np.asarray(result.details["class_means"])
    k = means.shape[0]
    cats = list(categories) if len(categories) == k else [f"class{c}" for c in range(k)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "name"] + [f"mean_{c}" for c in cats] + ["score"])
        for d in range(means.shape[1]):
            name = result.feature_names[d] if result.feature_names else f"f{d}"
            w.writerow([d, name] + [repr(float(v)) for v in means[:, d]] + [repr(float(result.scores[d]))])
