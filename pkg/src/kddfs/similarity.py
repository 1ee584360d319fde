"""Pairwise feature dissimilarities: correlation, least-square regression error, MICI.

All moments are population moments (divide by n).
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import numpy as np

from .dataset import FeatureMatrix
from .errors import DimensionError


class Measure(str, enum.Enum):
    CC = "cc"
    LSRE = "lsre"
    MICI = "mici"

    @property
    def symmetric(self) -> bool:
        return self is not Measure.LSRE


@dataclass(frozen=True)
class ColumnStats:
    mean_x: float
    mean_y: float
    var_x: float
    var_y: float
    cov: float
    constant_x: bool
    constant_y: bool


def column_stats(x, y) -> ColumnStats:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise DimensionError(f"columns must be 1-D and equal length, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise DimensionError("need at least two samples")
    mx, my = x.mean(), y.mean()
    cx, cy = x - mx, y - my
    return ColumnStats(
        float(mx), float(my), float(np.mean(cx * cx)), float(np.mean(cy * cy)),
        float(np.mean(cx * cy)), bool(x.min() == x.max()), bool(y.min() == y.max()),
    )


def correlation_dissimilarity(x, y) -> float:
    """1 - |rho(x, y)|; 1 when either column is constant."""
    s = column_stats(x, y)
    if s.constant_x or s.constant_y:
        return 1.0
    rho = s.cov / np.sqrt(s.var_x * s.var_y)
    return float(min(1.0, max(0.0, 1.0 - abs(rho))))


def lsre(x, y) -> float:
    """Residual variance of the least-squares line predicting ``y`` from ``x``.

    Equals var(y) * (1 - rho^2). A constant ``x`` predicts the mean, leaving var(y).
    """
    s = column_stats(x, y)
    if s.constant_y:
        return 0.0
    if s.constant_x:
        return s.var_y
    return float(min(s.var_y, max(0.0, s.var_y - s.cov * s.cov / s.var_x)))


def _min_eig_2x2(a, b, c):
    # smaller eigenvalue of [[a, c], [c, b]]; (a-b)^2 + 4c^2 avoids the
    # cancellation in (a+b)^2 - 4(ab - c^2)
    disc = np.sqrt((a - b) ** 2 + 4.0 * c * c)
    return np.maximum(0.0, 0.5 * (a + b - disc))


def mici(x, y) -> float:
    """Smallest eigenvalue of the 2x2 covariance matrix of (x, y)."""
    s = column_stats(x, y)
    return float(_min_eig_2x2(s.var_x, s.var_y, s.cov))


PAIRWISE = {
    Measure.CC: correlation_dissimilarity,
    Measure.LSRE: lsre,
    Measure.MICI: mici,
}


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """D x D dissimilarities; row i, column j is the distance from feature i to j."""

    measure: Measure
    values: np.ndarray
    feature_names: tuple = ()

    @property
    def n_features(self):
        return self.values.shape[0]

    def to_csv(self, path):
        names = self.feature_names or tuple(f"f{i}" for i in range(self.n_features))
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([""] + list(names))
            for name, row in zip(names, self.values):
                w.writerow([name] + [repr(float(v)) for v in row])


def _moments(values):
    values = np.asarray(values, dtype=np.float64)
    centered = values - values.mean(axis=0)
    cov = centered.T @ centered / values.shape[0]
    var = np.mean(centered * centered, axis=0)
    np.fill_diagonal(cov, var)
    constant = values.min(axis=0) == values.max(axis=0)
    return var, cov, constant


def build_similarity_matrix(matrix, measure, symmetrize: str | None = None) -> SimilarityMatrix:
    """All D^2 dissimilarities for the columns of ``matrix``.

    Vectorized over the covariance matrix; entry-wise it follows the pairwise
    functions above. ``symmetrize`` ('min' or 'max') only matters for LSRE.
    """
    measure = Measure(measure)
    names = matrix.feature_names if isinstance(matrix, FeatureMatrix) else ()
    values = matrix.values if isinstance(matrix, FeatureMatrix) else np.asarray(matrix, dtype=np.float64)
    if values.ndim != 2 or values.shape[1] < 2:
        raise DimensionError("need a 2-D matrix with at least two features")
    if values.shape[0] < 2:
        raise DimensionError("need at least two samples")
    var, cov, constant = _moments(values)
    vi, vj = var[:, None], var[None, :]
    ci, cj = constant[:, None], constant[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        if measure is Measure.CC:
            rho = cov / np.sqrt(vi * vj)
            out = np.clip(1.0 - np.abs(rho), 0.0, 1.0)
            out = np.where(ci | cj, 1.0, out)
        elif measure is Measure.LSRE:
            # row i predicts column j
            e = np.clip(vj - cov * cov / vi, 0.0, None)
            e = np.minimum(e, np.broadcast_to(vj, e.shape))
            out = np.where(ci, np.broadcast_to(vj, e.shape), e)
            out = np.where(cj, 0.0, out)
        else:
            out = _min_eig_2x2(vi, vj, cov)
    np.fill_diagonal(out, 0.0)
    if measure.symmetric:
        # enforce exact symmetry against rounding in the two triangles
        upper = np.triu(out, 1)
        out = upper + upper.T
    elif symmetrize == "min":
        out = np.minimum(out, out.T)
    elif symmetrize == "max":
        out = np.maximum(out, out.T)
    elif symmetrize is not None:
        raise ValueError(f"symmetrize must be 'min', 'max' or None, not {symmetrize!r}")
    out.flags.writeable = False
    return SimilarityMatrix(measure, out, tuple(names))
