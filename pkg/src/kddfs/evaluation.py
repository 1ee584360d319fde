"""Cross-validated comparison of feature selectors under KNN and naive Bayes."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .classifiers import UNDEFINED, knn_fit, knn_predict_batch, nb_fit, nb_predict_batch
from .clustering import ClusterSelectionParams, SelectionResult, select_by_clustering
from .dataset import CATEGORY_LABELS, FoldPlan, LabeledDataset, apply_minmax, fit_minmax, stratified_folds
from .errors import DegenerateFoldError
from .ffr import ffr_select
from .similarity import Measure

SELECTORS = ("cc", "lsre", "mici", "ffr", "all")
CLASSIFIERS = ("knn", "bayes")
TIMING_KEYS = frozenset({"selection_seconds", "elapsed_seconds", "fold_selection_seconds", "runtime"})


def make_selector(method: str, count: int, symmetrize: str | None = None, normalize: bool = False):
    """Callable ``dataset -> SelectionResult`` for one selector at one size."""
    method = method.lower()
    if method == "all":
        def select_all(ds):
            t0 = time.perf_counter()
            kept = tuple(range(ds.n_features))
            return SelectionResult(kept, np.zeros(ds.n_features), time.perf_counter() - t0, "all",
                                   ds.feature_names)
        return select_all
    if method == "ffr":
        return lambda ds: ffr_select(ds, count, normalize=normalize)
    if method in ("cc", "lsre", "mici"):
        params = ClusterSelectionParams(Measure(method), count, symmetrize=symmetrize)

        def select_cluster(ds):
            m = apply_minmax(ds.matrix, fit_minmax(ds.matrix)) if normalize else ds.matrix
            return select_by_clustering(m, params)
        return select_cluster
    raise ValueError(f"unknown selector {method!r}; expected one of {', '.join(SELECTORS)}")


@dataclass(frozen=True)
class ClassifierConfig:
    name: str = "knn"
    k: int = 5
    epsilon: float = 1e-9

    def __post_init__(self):
        if self.name not in CLASSIFIERS:
            raise ValueError(f"unknown classifier {self.name!r}; expected knn or bayes")

    def fit_predict(self, train_x, train_y, test_x, n_classes, class_names=None):
        if self.name == "knn":
            return knn_predict_batch(knn_fit(train_x, train_y, self.k, n_classes), test_x)
        return nb_predict_batch(nb_fit(train_x, train_y, self.epsilon, n_classes, class_names), test_x)


@dataclass(frozen=True, eq=False)
class FoldData:
    fold: int
    train: LabeledDataset
    test_values: np.ndarray
    test_labels: np.ndarray
    test_index: np.ndarray


def prepare_folds(dataset: LabeledDataset, folds: FoldPlan, raw: bool = False) -> list:
    """Split into folds; min-max is fitted on each training split only."""
    present = np.flatnonzero(dataset.category_counts() > 0)
    out = []
    for f, train_idx, test_idx in folds.splits():
        train = dataset.take(train_idx)
        test_values = dataset.values[test_idx]
        train_counts = train.category_counts()
        for c in present:
            if train_counts[c] == 0:
                raise DegenerateFoldError(f, dataset.categories[c])
        if not raw:
            params = fit_minmax(train)
            train = apply_minmax(train, params)
            test_values = apply_minmax(test_values, params)
        out.append(FoldData(f, train, test_values, dataset.labels[test_idx], test_idx))
    return out


@dataclass(eq=False)
class EvalCell:
    selector: str
    feature_count: int
    classifier: str
    per_category_recall: list
    overall_accuracy: float
    selection_seconds: float
    category_counts: list = field(default_factory=list)
    category_correct: list = field(default_factory=list)
    fold_kept: list = field(default_factory=list)
    error: str | None = None

    @property
    def key(self):
        return (self.selector, self.feature_count, self.classifier)

    def to_dict(self, categories) -> dict:
        return {
            "selector": self.selector,
            "feature_count": self.feature_count,
            "classifier": self.classifier,
            "per_category_recall": {c: _num(r) for c, r in zip(categories, self.per_category_recall)},
            "overall_accuracy": _num(self.overall_accuracy),
            "category_counts": [int(x) for x in self.category_counts],
            "category_correct": [int(x) for x in self.category_correct],
            "fold_kept": [[int(i) for i in kept] for kept in self.fold_kept],
            "selection_seconds": self.selection_seconds,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d, categories):
        recall = d.get("per_category_recall") or {}
        return cls(
            d["selector"], int(d["feature_count"]), d["classifier"],
            [_unnum(recall.get(c)) for c in categories], _unnum(d.get("overall_accuracy")),
            float(d.get("selection_seconds") or 0.0), d.get("category_counts", []),
            d.get("category_correct", []), d.get("fold_kept", []), d.get("error"),
        )


def _num(x):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else float(x)


def _unnum(x):
    return math.nan if x is None else float(x)


def pooled_scores(y_true, y_pred, n_classes):
    """Per-category recall and overall accuracy over pooled predictions.

    A category with any undefined prediction gets NaN recall, and so does the
    overall figure.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    counts = np.bincount(y_true, minlength=n_classes)
    correct = np.bincount(y_true[y_pred == y_true], minlength=n_classes)
    undefined = np.bincount(y_true[y_pred == UNDEFINED], minlength=n_classes)
    with np.errstate(divide="ignore", invalid="ignore"):
        recall = correct / counts
    recall = np.where(undefined > 0, np.nan, recall)
    overall = math.nan if undefined.any() else correct.sum() / counts.sum()
    return recall, float(overall), counts, correct


def _select_per_fold(fold_data, selector, select_global=None):
    kept, seconds = [], []
    if select_global is not None:
        res = selector(select_global)
        return [list(res.kept)] * len(fold_data), [res.elapsed_seconds]
    for fd in fold_data:
        res = selector(fd.train)
        kept.append(list(res.kept))
        seconds.append(res.elapsed_seconds)
    return kept, seconds


def _classify(fold_data, fold_kept, clf: ClassifierConfig, dataset: LabeledDataset):
    y_true, y_pred = [], []
    for fd, kept in zip(fold_data, fold_kept):
        pred = clf.fit_predict(fd.train.values[:, kept], fd.train.labels, fd.test_values[:, kept],
                               dataset.n_classes, dataset.categories)
        y_true.append(fd.test_labels)
        y_pred.append(pred)
    return pooled_scores(np.concatenate(y_true), np.concatenate(y_pred), dataset.n_classes)


def _global_view(dataset, raw):
    return dataset if raw else apply_minmax(dataset, fit_minmax(dataset))


def run_cv(dataset: LabeledDataset, selector, classifier: ClassifierConfig, folds: FoldPlan,
           raw: bool = False, select_global: bool = False, fold_data=None,
           selector_name: str = "", feature_count: int | None = None) -> EvalCell:
    """One grid cell: per fold, normalize on train, select on train, classify test."""
    if fold_data is None:
        fold_data = prepare_folds(dataset, folds, raw)
    gview = _global_view(dataset, raw) if select_global else None
    fold_kept, seconds = _select_per_fold(fold_data, selector, gview)
    recall, overall, counts, correct = _classify(fold_data, fold_kept, classifier, dataset)
    return EvalCell(
        selector_name, feature_count if feature_count is not None else len(fold_kept[0]),
        classifier.name, recall.tolist(), overall, float(min(seconds)),
        counts.tolist(), correct.tolist(), fold_kept,
    )


@dataclass(eq=False)
class EvalReport:
    categories: tuple
    cells: list
    dataset: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    runtime: dict = field(default_factory=dict)

    def cell(self, selector, feature_count, classifier):
        for c in self.cells:
            if c.key == (selector, feature_count, classifier):
                return c
        raise KeyError((selector, feature_count, classifier))

    def to_dict(self) -> dict:
        return {
            "categories": list(self.categories),
            "dataset": self.dataset,
            "config": self.config,
            "cells": [c.to_dict(self.categories) for c in self.cells],
            "runtime": self.runtime,
        }

    @classmethod
    def from_dict(cls, d) -> EvalReport:
        cats = tuple(d["categories"])
        return cls(cats, [EvalCell.from_dict(c, cats) for c in d.get("cells", [])],
                   d.get("dataset", {}), d.get("config", {}), d.get("runtime", {}))


def dataset_fingerprint(dataset: LabeledDataset, seed) -> dict:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(dataset.values).tobytes())
    h.update(np.ascontiguousarray(dataset.labels).tobytes())
    counts = dataset.category_counts()
    return {
        "n_samples": int(dataset.n_samples),
        "n_features": int(dataset.n_features),
        "category_counts": {c: int(n) for c, n in zip(dataset.categories, counts)},
        "seed": seed,
        "sha256": h.hexdigest(),
    }


def run_grid(dataset: LabeledDataset, selectors=("cc", "lsre", "mici", "ffr"), counts=(10, 20, 30),
             classifiers=("knn", "bayes"), seed: int = 42, n_folds: int = 10, stratify: bool = True,
             raw: bool = False, select_global: bool = False, knn_k: int = 5, epsilon: float = 1e-9,
             symmetrize: str | None = None, threads: int = 1, config: dict | None = None) -> EvalReport:
    """Full factorial grid plus the no-selection ("all") baseline per classifier.

    A failing (selector, count) job marks its cells with an error instead of
    aborting the grid. Cell order depends only on the arguments.
    """
    t_start = time.perf_counter()
    dataset = dataset.drop_empty_categories()
    clfs = [ClassifierConfig(name, knn_k, epsilon) for name in classifiers]
    jobs = [("all", dataset.n_features)]
    jobs += [(s, int(t)) for s in selectors if s != "all" for t in counts]
    folds = stratified_folds(dataset.labels, n_folds, seed, stratify)

    prep_error = None
    try:
        fold_data = prepare_folds(dataset, folds, raw)
    except Exception as exc:  # recorded per cell below
        fold_data, prep_error = None, f"{type(exc).__name__}: {exc}"
    gview = _global_view(dataset, raw) if (select_global and fold_data is not None) else None

    def run_job(job):
        name, t = job
        if prep_error is not None:
            return [_error_cell(name, t, c.name, dataset.n_classes, prep_error) for c in clfs]
        try:
            selector = make_selector(name, t, symmetrize)
            fold_kept, seconds = _select_per_fold(fold_data, selector, gview)
        except Exception as exc:
            msg = f"{type(exc).__name__}: {exc}"
            return [_error_cell(name, t, c.name, dataset.n_classes, msg) for c in clfs]
        cells = []
        for clf in clfs:
            try:
                recall, overall, cnt, correct = _classify(fold_data, fold_kept, clf, dataset)
                cells.append(EvalCell(name, t, clf.name, recall.tolist(), overall, float(min(seconds)),
                                      cnt.tolist(), correct.tolist(), fold_kept))
            except Exception as exc:
                cells.append(_error_cell(name, t, clf.name, dataset.n_classes, f"{type(exc).__name__}: {exc}"))
        return cells

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_job, jobs))
    else:
        results = [run_job(j) for j in jobs]
    cells = [c for group in results for c in group]

    cfg = {
        "selectors": list(selectors), "counts": [int(t) for t in counts], "classifiers": list(classifiers),
        "seed": seed, "n_folds": n_folds, "stratify": stratify, "raw": raw,
        "select_global": select_global, "knn_k": knn_k, "epsilon": epsilon, "symmetrize": symmetrize,
    }
    cfg.update(config or {})
    return EvalReport(
        dataset.categories, cells, dataset_fingerprint(dataset, seed), cfg,
        {"threads": threads, "elapsed_seconds": time.perf_counter() - t_start},
    )


def _error_cell(selector, t, classifier, k, message):
    nan = [math.nan] * k
    return EvalCell(selector, t, classifier, nan, math.nan, math.nan, error=message)


# ---------------------------------------------------------------------------
# serialization


def strip_timing(obj):
    """Copy of a report dict without wall-clock fields."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _pct(x):
    return "NaN" if x is None or math.isnan(x) else f"{100.0 * x:.2f}"


def _label(cat):
    return CATEGORY_LABELS.get(cat, cat)


def _columns(report, classifier):
    cols = [c for c in report.cells if c.classifier == classifier]
    baseline = [c for c in cols if c.selector == "all"]
    others = [c for c in cols if c.selector != "all"]
    return baseline + others


def _column_title(cell):
    return "All" if cell.selector == "all" else f"{cell.selector.upper()} {cell.feature_count}"


def _markdown(report: EvalReport) -> str:
    out = io.StringIO()
    classifiers = list(dict.fromkeys(c.classifier for c in report.cells))
    if not classifiers:
        out.write("| Attack type |\n|---|\n")
        return out.getvalue()
    for clf in classifiers:
        cols = _columns(report, clf)
        title = {"knn": "KNN", "bayes": "Bayes"}.get(clf, clf)
        out.write(f"### {title} classifier accuracy (%)\n\n")
        out.write("| Attack type | " + " | ".join(_column_title(c) for c in cols) + " |\n")
        out.write("|---" * (len(cols) + 1) + "|\n")
        for i, cat in enumerate(report.categories):
            row = ["ERR" if c.error else _pct(c.per_category_recall[i]) for c in cols]
            out.write(f"| {_label(cat)} | " + " | ".join(row) + " |\n")
        row = ["ERR" if c.error else _pct(c.overall_accuracy) for c in cols]
        out.write("| Over all | " + " | ".join(row) + " |\n\n")
    timed = {}
    for c in report.cells:
        if c.selector != "all" and not c.error:
            timed.setdefault(c.selector, {})[c.feature_count] = c.selection_seconds
    if timed:
        sizes = sorted({t for v in timed.values() for t in v})
        out.write("### Feature selection time (s)\n\n")
        out.write("| Selector | " + " | ".join(str(t) for t in sizes) + " |\n")
        out.write("|---" * (len(sizes) + 1) + "|\n")
        for sel, by_t in timed.items():
            vals = [f"{by_t[t]:.4f}" if t in by_t else "" for t in sizes]
            out.write(f"| {sel.upper()} | " + " | ".join(vals) + " |\n")
    errors = [c for c in report.cells if c.error]
    if errors:
        out.write("\nErrors:\n\n")
        for c in errors:
            out.write(f"- {_column_title(c)} / {c.classifier}: {c.error}\n")
    return out.getvalue()


def _csv(report: EvalReport) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["selector", "feature_count", "classifier"] + list(report.categories)
               + ["overall", "selection_seconds", "error"])
    for c in report.cells:
        w.writerow([c.selector, c.feature_count, c.classifier]
                   + [_pct(r) for r in c.per_category_recall]
                   + [_pct(c.overall_accuracy), repr(c.selection_seconds), c.error or ""])
    return out.getvalue()


def emit_report(report: EvalReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(_json_safe(report.to_dict()), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _csv(report)
    if fmt == "markdown":
        return _markdown(report)
    raise ValueError(f"unknown report format {fmt!r}")


def load_report(path) -> EvalReport:
    with open(path, encoding="utf-8") as fh:
        return EvalReport.from_dict(json.load(fh))
