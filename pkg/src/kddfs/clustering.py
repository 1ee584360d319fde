"""Feature selection by k-NN clustering of features under a dissimilarity measure.

Follows the representative-feature scheme of Mitra, Murthy and Pal (2002):
repeatedly keep the feature whose k-th nearest remaining neighbour is closest,
drop those k neighbours, and shrink k as the pool runs out. The number of
kept features depends only on D and k, so k is found by bisection; k=0 is
the no-discard end of that range.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import FeatureMatrix
from .similarity import Measure, build_similarity_matrix


@dataclass(frozen=True, eq=False)
class SelectionResult:
    kept: tuple
    scores: np.ndarray
    elapsed_seconds: float
    selector: str
    feature_names: tuple = ()
    details: dict = field(default_factory=dict)

    @property
    def n_kept(self):
        return len(self.kept)

    def to_dict(self) -> dict:
        names = [self.feature_names[i] for i in self.kept] if self.feature_names else []
        return {
            "selector": self.selector,
            "kept": [int(i) for i in self.kept],
            "names": names,
            "scores": [float(self.scores[i]) for i in self.kept],
            "elapsed_seconds": self.elapsed_seconds,
            "details": self.details,
        }


@dataclass(frozen=True)
class ClusterSelectionParams:
    measure: Measure
    target_count: int
    k: int | None = None  # fixed k; None means search for target_count
    symmetrize: str | None = None

    def validate(self, n_features):
        if n_features < 2:
            raise ValueError("clustering selection needs at least two features")
        if not 1 <= self.target_count <= n_features:
            raise ValueError(f"target_count={self.target_count} unreachable with {n_features} features")
        if self.k is not None and not 1 <= self.k <= n_features - 1:
            raise ValueError(f"k must lie in [1, {n_features - 1}]")


def _ordered_neighbours(dist, pool):
    """Rows: neighbours of each pool member (excluding itself), nearest first.

    Pool is ascending, so a stable sort breaks distance ties by lower index.
    """
    sub = dist[np.ix_(pool, pool)].copy()
    np.fill_diagonal(sub, np.inf)
    order = np.argsort(sub, axis=1, kind="stable")
    return sub, order[:, :-1]


def _nn_distance(dist, members):
    members = np.asarray(members)
    off = dist[members].copy()
    off[np.arange(members.size), members] = np.inf
    return off.min(axis=1)


def cluster_once(dist, k):
    """One pass with initial neighbour count ``k``.

    Returns (kept, scores, representative): ``scores[i]`` is the k-NN radius for
    kept features and the distance to the representative for discarded ones.
    ``k=0`` discards nothing and scores every feature by its nearest neighbour.
    """
    dist = np.asarray(dist, dtype=np.float64)
    d = dist.shape[0]
    scores = np.zeros(d)
    representative = np.arange(d)
    if k == 0:
        return list(range(d)), _nn_distance(dist, np.arange(d)), representative
    kept = []
    pool = list(range(d))
    while pool:
        if len(pool) == 1:
            last = pool.pop()
            kept.append(last)
            scores[last] = _nn_distance(dist, [last])[0]
            break
        kk = min(k, len(pool) - 1)
        sub, order = _ordered_neighbours(dist, pool)
        rows = np.arange(len(pool))
        radius = sub[rows, order[:, kk - 1]]
        best = int(np.argmin(radius))
        keep = pool[best]
        kept.append(keep)
        scores[keep] = radius[best]
        dropped = {pool[j] for j in order[best, :kk]}
        for j in dropped:
            scores[j] = dist[keep, j]
            representative[j] = keep
        pool = [f for f in pool if f != keep and f not in dropped]
    return kept, scores, representative


def count_kept(d, k):
    """Kept-feature count of :func:`cluster_once` for D features and initial k."""
    if k == 0:
        return d
    pool, kept = d, 0
    while pool:
        kept += 1
        pool -= min(k, pool - 1) + 1
    return kept


def search_k(d, target):
    """Largest k in [0, D-1] keeping at least ``target`` features (bisection)."""
    if not 1 <= target <= d:
        raise ValueError(f"target_count={target} unreachable for D={d}")
    lo, hi = 0, d - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if count_kept(d, mid) >= target:
            lo = mid
        else:
            hi = mid - 1
    return lo


def cluster_features(dist, target_count, k=None):
    """Select exactly ``target_count`` representatives from a D x D distance table.

    Returns (kept, scores, k_used). Kept features are ordered by ascending
    radius, ties by index.
    """
    dist = np.asarray(dist, dtype=np.float64)
    d = dist.shape[0]
    if not 1 <= target_count <= d:
        raise ValueError(f"target_count={target_count} unreachable with {d} features")
    if target_count == d:
        return list(range(d)), np.zeros(d), 0
    if k is None:
        k = search_k(d, target_count)
    kept, scores, _ = cluster_once(dist, k)
    kept = sorted(kept, key=lambda i: (scores[i], i))
    if len(kept) < target_count:
        raise ValueError(f"k={k} keeps {len(kept)} features, fewer than {target_count}")
    # trim the least representative (largest radius) down to the target
    return kept[:target_count], scores, k


def select_by_clustering(matrix, params: ClusterSelectionParams) -> SelectionResult:
    values = matrix.values if isinstance(matrix, FeatureMatrix) else np.asarray(matrix)
    names = matrix.feature_names if isinstance(matrix, FeatureMatrix) else ()
    params.validate(values.shape[1])
    t0 = time.perf_counter()
    sim = build_similarity_matrix(values, params.measure, params.symmetrize)
    kept, scores, k_used = cluster_features(sim.values, params.target_count, params.k)
    elapsed = time.perf_counter() - t0
    return SelectionResult(
        tuple(int(i) for i in kept), scores, elapsed, Measure(params.measure).value, tuple(names),
        {"k": int(k_used), "symmetrize": params.symmetrize},
    )


def time_selection(data, selector, repeats: int = 3) -> float:
    """Minimum wall-clock seconds over ``repeats`` calls of ``selector(data)``."""
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        selector(data)
        best = min(best, time.perf_counter() - t0)
    return best
