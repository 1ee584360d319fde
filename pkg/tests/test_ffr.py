import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kddfs.dataset import FeatureMatrix, LabeledDataset
from kddfs.errors import DegenerateClassError
from kddfs.ffr import ClassMeanTable, class_means, dump_scores, ffr_scores, ffr_select, select_top_t
from oracles import ffr_single_pass


def _ds(values, labels, k=None):
    values = np.asarray(values, dtype=np.float64)
    k = k or int(np.max(labels)) + 1
    names = tuple(f"f{j}" for j in range(values.shape[1]))
    return LabeledDataset(FeatureMatrix(values, names), np.asarray(labels), tuple(f"c{i}" for i in range(k)))


def test_class_means_example():
    t = class_means(np.array([[1.0], [3.0], [5.0], [7.0]]), np.array([0, 0, 1, 1]))
    assert t.values[:, 0].tolist() == [2.0, 6.0]
    assert t.class_counts.tolist() == [2, 2]


def test_one_sample_per_class():
    x = np.array([[1.0, 2.0], [3.0, 5.0], [0.0, -1.0]])
    assert np.array_equal(class_means(x, np.array([0, 1, 2])).values, x)


def test_class_means_group_by_oracle(rng):
    x = rng.normal(size=(1000, 7))
    y = rng.integers(0, 4, size=1000)
    want = np.array([[x[y == c, j].sum() / (y == c).sum() for j in range(7)] for c in range(4)])
    assert np.allclose(class_means(x, y).values, want, rtol=0, atol=1e-12)


def test_empty_class_is_named():
    ds = _ds([[1.0], [2.0]], [0, 2], k=3)
    with pytest.raises(DegenerateClassError, match="c1"):
        class_means(ds)


@pytest.mark.parametrize("means,score", [([2.0, 6.0], 4.0), ([3.0, 3.0], 0.0), ([0.0, 10.0], 25.0)])
def test_ffr_scores_examples(means, score):
    s = ffr_scores(ClassMeanTable(np.array(means)[:, None], np.ones(2)))
    assert s.scores[0] == score


def test_ffr_scores_needs_two_classes():
    with pytest.raises(ValueError):
        ffr_scores(ClassMeanTable(np.ones((1, 3)), np.ones(1)))


def test_select_top_t_examples():
    assert select_top_t([4, 0.1, 9], 2) == [2, 0]
    assert select_top_t([4, 0.1, 9], 3) == [2, 0, 1]
    assert select_top_t([5, 5, 1], 1) == [0]
    with pytest.raises(ValueError):
        select_top_t([1, 2], 3)
    with pytest.raises(ValueError):
        select_top_t([1, 2], 0)


def test_separating_feature_is_kept():
    x = np.array([[0.0, 1.0], [0.1, 2.0], [0.2, 3.0], [0.9, 1.0], [1.0, 2.0], [1.1, 3.0]])
    res = ffr_select(_ds(x, [0, 0, 0, 1, 1, 1]), 1)
    assert res.kept == (0,)
    assert res.scores[1] == 0.0


def test_matches_single_pass_oracle(rng):
    for _ in range(20):
        n, d, k = int(rng.integers(20, 400)), int(rng.integers(2, 30)), int(rng.integers(2, 6))
        y = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
        x = rng.normal(size=(n, d)) + rng.normal(size=(k, d))[y] * rng.uniform(0, 3, size=d)
        t = int(rng.integers(1, d + 1))
        kept, scores = ffr_single_pass(x.tolist(), y.tolist(), k, t)
        res = ffr_select(_ds(x, y, k), t, normalize=False)
        assert np.allclose(res.scores, scores, rtol=0, atol=1e-9)
        assert list(res.kept) == kept


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_permutation_and_duplication_invariance(seed):
    rng = np.random.default_rng(seed)
    n, d = 60, 8
    y = np.concatenate([[0, 1, 2], rng.integers(0, 3, size=n - 3)])
    x = rng.integers(0, 5, size=(n, d)).astype(float) + rng.normal(size=(3, d))[y]
    t = int(rng.integers(1, d + 1))
    base = ffr_select(_ds(x, y), t).kept
    perm = rng.permutation(n)
    assert ffr_select(_ds(x[perm], y[perm]), t).kept == base
    assert ffr_select(_ds(np.vstack([x, x]), np.concatenate([y, y])), t).kept == base


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(1e-3, 1e3))
def test_normalized_selection_ignores_feature_scale(seed, c):
    rng = np.random.default_rng(seed)
    y = np.concatenate([[0, 1], rng.integers(0, 2, size=78)])
    x = rng.normal(size=(80, 6)) + rng.normal(size=(2, 6))[y]
    j = int(rng.integers(0, 6))
    scaled = x.copy()
    scaled[:, j] *= c
    a, b = ffr_select(_ds(x, y), 3), ffr_select(_ds(scaled, y), 3)
    assert np.allclose(a.scores, b.scores, rtol=1e-9, atol=1e-15)
    # compare as sets: a near-tie could still swap order under rounding
    assert set(a.kept) == set(b.kept) or np.isclose(*np.sort(a.scores)[-4:-2])


def test_raw_mode_is_scale_sensitive():
    x = np.array([[0.0, 0.0], [1.0, 1.0]])
    ds = _ds(x * [1.0, 100.0], [0, 1])
    assert ffr_select(ds, 1, normalize=False).kept == (1,)
    assert ffr_select(ds, 1, normalize=True).kept == (0,)  # tie after scaling, lower index


def _median_elapsed(ds, t, runs=5):
    return float(np.median([ffr_select(ds, t, normalize=False).elapsed_seconds for _ in range(runs)]))


def test_runtime_linear_in_rows(rng):
    # sizes past the cache so both runs are memory-bound
    d = 41
    small = _ds(rng.random((100_000, d)), rng.integers(0, 5, size=100_000), 5)
    big = _ds(rng.random((200_000, d)), rng.integers(0, 5, size=200_000), 5)
    _median_elapsed(small, 10)  # warm-up
    assert _median_elapsed(big, 10) <= 2.5 * _median_elapsed(small, 10)


def test_dump_scores(tmp_path, fixture_dataset):
    res = ffr_select(fixture_dataset, 5)
    dump_scores(res, tmp_path / "s.csv", fixture_dataset.categories)
    rows = (tmp_path / "s.csv").read_text().splitlines()
    assert rows[0] == "index,name,mean_normal,mean_dos,mean_probe,mean_r2l,mean_u2r,score"
    assert len(rows) == 42
    assert rows[1].startswith("0,duration,")
