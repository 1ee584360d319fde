"""Fast feature reduction and similarity-based feature selection for KDD-99 style data."""

__version__ = "0.1.0"

from .classifiers import knn_fit, knn_predict, knn_predict_batch, nb_fit, nb_predict, nb_predict_batch
from .clustering import ClusterSelectionParams, SelectionResult, select_by_clustering, time_selection
from .dataset import (
    FeatureMatrix, LabeledDataset, apply_minmax, fit_minmax, load_kdd, parse_kdd_record, map_category,
    stratified_folds, stratified_subsample,
)
from .evaluation import EvalReport, emit_report, run_cv, run_grid
from .ffr import class_means, ffr_scores, ffr_select, select_top_t
from .similarity import Measure, build_similarity_matrix, correlation_dissimilarity, lsre, mici

__all__ = [
    "ClusterSelectionParams", "EvalReport", "FeatureMatrix", "LabeledDataset", "Measure",
    "SelectionResult", "apply_minmax", "build_similarity_matrix", "class_means",
    "correlation_dissimilarity", "emit_report", "ffr_scores", "ffr_select", "fit_minmax", "knn_fit",
    "knn_predict", "knn_predict_batch", "load_kdd", "lsre", "map_category", "mici", "nb_fit",
    "nb_predict", "nb_predict_batch", "parse_kdd_record", "run_cv", "run_grid", "select_by_clustering",
    "select_top_t", "stratified_folds", "stratified_subsample", "time_selection",
]
