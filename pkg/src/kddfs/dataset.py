"""KDD-99 connection records: parsing, encoding, normalization, sampling, folds."""

from __future__ import annotations

import csv
import gzip
import io
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, KddfsError, MalformedRecordError, UnknownCategoryError

FEATURE_NAMES = (
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in",
    "num_compromised", "root_shell", "su_attempted", "num_root",
    "num_file_creations", "num_shells", "num_access_files", "num_outbound_cmds",
    "is_host_login", "is_guest_login", "count", "srv_count", "serror_rate",
    "srv_serror_rate", "rerror_rate", "srv_rerror_rate", "same_srv_rate",
    "diff_srv_rate", "srv_diff_host_rate", "dst_host_count", "dst_host_srv_count",
    "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate",
    "dst_host_serror_rate", "dst_host_srv_serror_rate", "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate",
)
N_FEATURES = len(FEATURE_NAMES)
# 0-indexed positions of protocol_type, service, flag
SYMBOLIC_COLUMNS = (1, 2, 3)
NUMERIC_COLUMNS = tuple(i for i in range(N_FEATURES) if i not in SYMBOLIC_COLUMNS)

CATEGORIES = ("normal", "dos", "probe", "r2l", "u2r")
CATEGORY_LABELS = {"normal": "Normal", "dos": "DoS", "probe": "Prob", "r2l": "R2L", "u2r": "U2R"}

# subcategory -> (sample count in "10% KDD", category)
SUBCATEGORIES_10_PERCENT = {
    "smurf": (280790, "dos"),
    "neptune": (107201, "dos"),
    "back": (2203, "dos"),
    "teardrop": (979, "dos"),
    "pod": (264, "dos"),
    "land": (21, "dos"),
    "normal": (97277, "normal"),
    "satan": (1589, "probe"),
    "ipsweep": (1247, "probe"),
    "portsweep": (1040, "probe"),
    "nmap": (231, "probe"),
    "warezclient": (1020, "r2l"),
    "guess_passwd": (53, "r2l"),
    "warezmaster": (20, "r2l"),
    "imap": (12, "r2l"),
    "ftp_write": (8, "r2l"),
    "multihop": (7, "r2l"),
    "phf": (4, "r2l"),
    "spy": (2, "r2l"),
    "buffer_overflow": (30, "u2r"),
    "rootkit": (10, "u2r"),
    "loadmodule": (9, "u2r"),
    "perl": (3, "u2r"),
}
SUBCATEGORY_MAP = {name: cat for name, (_, cat) in SUBCATEGORIES_10_PERCENT.items()}
CATEGORY_TOTALS_10_PERCENT = {"dos": 391458, "probe": 4107, "u2r": 52, "r2l": 1126, "normal": 97277}


# ---------------------------------------------------------------------------
# containers


def _readonly(a):
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Dense N x D table of reals with column names."""

    values: np.ndarray
    feature_names: tuple

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise DimensionError(f"expected a 2-D matrix, got shape {v.shape}")
        names = tuple(self.feature_names)
        if len(names) != v.shape[1]:
            raise DimensionError(f"{len(names)} feature names for {v.shape[1]} columns")
        if not np.all(np.isfinite(v)):
            raise KddfsError("matrix contains missing or non-finite entries")
        object.__setattr__(self, "values", _readonly(v))
        object.__setattr__(self, "feature_names", names)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def column(self, j) -> np.ndarray:
        return self.values[:, j]

    def take_rows(self, idx) -> FeatureMatrix:
        return FeatureMatrix(self.values[np.asarray(idx)], self.feature_names)

    def take_columns(self, idx) -> FeatureMatrix:
        idx = [int(i) for i in idx]
        return FeatureMatrix(self.values[:, idx], tuple(self.feature_names[i] for i in idx))


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    matrix: FeatureMatrix
    labels: np.ndarray
    categories: tuple = CATEGORIES
    subcategory: np.ndarray | None = None
    encoder: CategoricalEncoder | None = None

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.shape != (self.matrix.n_samples,):
            raise DimensionError(
                f"{labels.shape[0] if labels.ndim else 0} labels for {self.matrix.n_samples} rows"
            )
        cats = tuple(self.categories)
        if labels.size and (labels.min() < 0 or labels.max() >= len(cats)):
            raise KddfsError(f"label ids must lie in [0, {len(cats)})")
        object.__setattr__(self, "labels", _readonly(labels))
        object.__setattr__(self, "categories", cats)
        if self.subcategory is not None:
            sub = np.asarray(self.subcategory, dtype=object)
            if sub.shape != labels.shape:
                raise DimensionError("subcategory length differs from label length")
            object.__setattr__(self, "subcategory", _readonly(sub))

    @property
    def values(self) -> np.ndarray:
        return self.matrix.values

    @property
    def feature_names(self) -> tuple:
        return self.matrix.feature_names

    @property
    def n_samples(self) -> int:
        return self.matrix.n_samples

    @property
    def n_features(self) -> int:
        return self.matrix.n_features

    @property
    def n_classes(self) -> int:
        return len(self.categories)

    def category_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def subcategory_counts(self) -> dict:
        if self.subcategory is None:
            return {}
        names, counts = np.unique(self.subcategory.astype(str), return_counts=True)
        return {str(n): int(c) for n, c in zip(names, counts)}

    def take(self, idx) -> LabeledDataset:
        idx = np.asarray(idx, dtype=np.int64)
        sub = None if self.subcategory is None else self.subcategory[idx]
        return LabeledDataset(self.matrix.take_rows(idx), self.labels[idx], self.categories, sub, self.encoder)

    def with_matrix(self, matrix: FeatureMatrix) -> LabeledDataset:
        return LabeledDataset(matrix, self.labels, self.categories, self.subcategory, self.encoder)

    def take_features(self, idx) -> LabeledDataset:
        return self.with_matrix(self.matrix.take_columns(idx))

    def drop_empty_categories(self) -> LabeledDataset:
        counts = self.category_counts()
        keep = np.flatnonzero(counts > 0)
        if keep.size == self.n_classes:
            return self
        remap = np.full(self.n_classes, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.size)
        return LabeledDataset(
            self.matrix, remap[self.labels], tuple(self.categories[i] for i in keep),
            self.subcategory, self.encoder,
        )


# ---------------------------------------------------------------------------
# parsing


def parse_kdd_record(line: str, line_number: int | None = None):
    """Split one connection record into 41 feature fields and its subcategory.

    Symbolic columns stay strings; the rest are converted to float.
    """
    fields = line.strip().split(",")
    if len(fields) != N_FEATURES + 1:
        raise MalformedRecordError(f"expected {N_FEATURES + 1} fields, got {len(fields)}", line_number)
    values = []
    for i, raw in enumerate(fields[:N_FEATURES]):
        raw = raw.strip()
        if i in SYMBOLIC_COLUMNS:
            values.append(raw)
            continue
        try:
            values.append(float(raw))
        except ValueError:
            raise MalformedRecordError(
                f"non-numeric value {raw!r} in column {i + 1} ({FEATURE_NAMES[i]})", line_number
            ) from None
    label = fields[N_FEATURES].strip()
    if label.endswith("."):
        label = label[:-1]
    return values, label


def map_category(subcategory: str, category_map: dict | None = None, categories=CATEGORIES) -> int:
    mapping = SUBCATEGORY_MAP if category_map is None else category_map
    try:
        return list(categories).index(mapping[subcategory])
    except KeyError:
        raise UnknownCategoryError([subcategory]) from None


def read_category_map(path) -> dict:
    """Two-column ``subcategory,category`` text file; blank and ``#`` lines ignored."""
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2 or not all(parts):
                raise MalformedRecordError("expected 'subcategory,category'", n)
            mapping[parts[0].rstrip(".")] = parts[1]
    return mapping


def categories_for(category_map: dict) -> tuple:
    found = set(category_map.values())
    known = [c for c in CATEGORIES if c in found]
    return tuple(known + sorted(found - set(CATEGORIES)))


def _open_text(path):
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"\x1f\x8b":
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, encoding="utf-8")


@dataclass(frozen=True, eq=False)
class RawRecords:
    """Parsed but not yet encoded records."""

    numeric: np.ndarray  # N x len(NUMERIC_COLUMNS)
    symbolic: np.ndarray  # N x len(SYMBOLIC_COLUMNS), dtype object
    subcategory: np.ndarray  # N, dtype object

    def __len__(self):
        return self.numeric.shape[0]


def parse_lines(lines, chunk_size=65536) -> RawRecords:
    n_num, n_sym = len(NUMERIC_COLUMNS), len(SYMBOLIC_COLUMNS)
    num_chunks, sym_rows, subs = [], [], []
    buf = []
    for n, line in enumerate(lines, 1):
        if not line.strip():
            continue
        values, label = parse_kdd_record(line, n)
        buf.append([values[i] for i in NUMERIC_COLUMNS])
        sym_rows.append([values[i] for i in SYMBOLIC_COLUMNS])
        subs.append(label)
        if len(buf) >= chunk_size:
            num_chunks.append(np.array(buf, dtype=np.float64))
            buf = []
    if buf:
        num_chunks.append(np.array(buf, dtype=np.float64))
    numeric = np.concatenate(num_chunks) if num_chunks else np.empty((0, n_num))
    symbolic = np.empty((len(sym_rows), n_sym), dtype=object)
    if sym_rows:
        symbolic[:] = sym_rows
    return RawRecords(numeric, symbolic, np.array(subs, dtype=object))


def read_kdd(path) -> RawRecords:
    """Read a KDD-99 file (plain or gzip) into raw records."""
    with _open_text(path) as fh:
        return parse_lines(fh)


# ---------------------------------------------------------------------------
# symbolic encoding


@dataclass(frozen=True)
class CategoricalEncoder:
    """Per symbolic column, a sorted vocabulary; code = position in it."""

    vocabularies: dict = field(default_factory=dict)

    @classmethod
    def fit(cls, symbolic, columns=SYMBOLIC_COLUMNS) -> CategoricalEncoder:
        symbolic = np.asarray(symbolic, dtype=object)
        vocab = {}
        for j, col in enumerate(columns):
            vocab[col] = tuple(sorted({str(s) for s in symbolic[:, j]}))
        return cls(vocab)

    def encode(self, column: int, values) -> np.ndarray:
        lookup = {s: i for i, s in enumerate(self.vocabularies[column])}
        try:
            return np.array([lookup[str(v)] for v in values], dtype=np.float64)
        except KeyError as exc:
            raise KddfsError(
                f"value {exc.args[0]!r} not in vocabulary of column {column + 1}"
            ) from None

    def decode(self, column: int, codes) -> list:
        vocab = self.vocabularies[column]
        return [vocab[int(c)] for c in codes]

    def to_dict(self) -> dict:
        return {str(k): list(v) for k, v in self.vocabularies.items()}

    @classmethod
    def from_dict(cls, d) -> CategoricalEncoder:
        return cls({int(k): tuple(v) for k, v in d.items()})


def encode_symbolic(raw: RawRecords, encoder: CategoricalEncoder | None = None) -> FeatureMatrix:
    """Replace symbolic columns by ordinal codes and assemble the 41-column matrix."""
    if encoder is None:
        encoder = CategoricalEncoder.fit(raw.symbolic)
    n = len(raw)
    values = np.empty((n, N_FEATURES), dtype=np.float64)
    values[:, list(NUMERIC_COLUMNS)] = raw.numeric
    for j, col in enumerate(SYMBOLIC_COLUMNS):
        values[:, col] = encoder.encode(col, raw.symbolic[:, j])
    return FeatureMatrix(values, FEATURE_NAMES)


def label_records(raw: RawRecords, category_map: dict | None = None,
                  encoder: CategoricalEncoder | None = None) -> LabeledDataset:
    mapping = SUBCATEGORY_MAP if category_map is None else category_map
    categories = CATEGORIES if category_map is None else categories_for(category_map)
    unknown = {s for s in set(raw.subcategory) if s not in mapping}
    if unknown:
        raise UnknownCategoryError(unknown)
    cat_index = {c: i for i, c in enumerate(categories)}
    labels = np.array([cat_index[mapping[s]] for s in raw.subcategory], dtype=np.int64)
    if encoder is None:
        encoder = CategoricalEncoder.fit(raw.symbolic)
    return LabeledDataset(encode_symbolic(raw, encoder), labels, categories, raw.subcategory, encoder)


def load_kdd(path, category_map: dict | None = None) -> LabeledDataset:
    """Parse, label and encode a KDD-99 file."""
    return label_records(read_kdd(path), category_map)


# ---------------------------------------------------------------------------
# min-max normalization


@dataclass(frozen=True, eq=False)
class NormalizerParams:
    mins: np.ndarray
    maxs: np.ndarray

    @property
    def n_features(self):
        return self.mins.shape[0]


def _values(m):
    return m.values if isinstance(m, (FeatureMatrix, LabeledDataset)) else np.asarray(m, dtype=np.float64)


def fit_minmax(matrix) -> NormalizerParams:
    v = _values(matrix)
    if v.shape[0] == 0:
        raise KddfsError("cannot fit normalizer on an empty matrix")
    return NormalizerParams(_readonly(v.min(axis=0)), _readonly(v.max(axis=0)))


def apply_minmax(matrix, params: NormalizerParams):
    """Map each value to (v - min) / (max - min); constant features map to 0. No clamping."""
    v = _values(matrix)
    if v.shape[1] != params.n_features:
        raise DimensionError(f"normalizer fitted on {params.n_features} features, got {v.shape[1]}")
    span = params.maxs - params.mins
    constant = span == 0
    out = (v - params.mins) / np.where(constant, 1.0, span)
    out[:, constant] = 0.0
    if isinstance(matrix, LabeledDataset):
        return matrix.with_matrix(FeatureMatrix(out, matrix.feature_names))
    if isinstance(matrix, FeatureMatrix):
        return FeatureMatrix(out, matrix.feature_names)
    return out


# ---------------------------------------------------------------------------
# folds and subsampling


@dataclass(frozen=True, eq=False)
class FoldPlan:
    n_folds: int
    assignments: np.ndarray

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def splits(self):
        for f in range(self.n_folds):
            yield f, self.train_indices(f), self.test_indices(f)


def stratified_folds(labels, n_folds: int = 10, seed: int = 0, stratify: bool = True) -> FoldPlan:
    """Shuffle each category by ``seed`` and deal its members round-robin over the folds.

    The dealing position carries over from one category to the next so small
    categories do not all pile into the first folds.
    """
    labels = np.asarray(labels)
    if n_folds < 2:
        raise ValueError("n_folds must be at least 2")
    if labels.shape[0] < n_folds:
        raise ValueError(f"{labels.shape[0]} samples cannot fill {n_folds} folds")
    rng = np.random.default_rng(seed)
    assignments = np.empty(labels.shape[0], dtype=np.int64)
    groups = [np.flatnonzero(labels == c) for c in np.unique(labels)] if stratify else [np.arange(labels.shape[0])]
    offset = 0
    for members in groups:
        members = rng.permutation(members)
        assignments[members] = (offset + np.arange(members.size)) % n_folds
        offset = (offset + members.size) % n_folds
    return FoldPlan(n_folds, _readonly(assignments))


def _allocate(counts, target_n, floors):
    """Largest-remainder allocation of ``target_n`` proportional to ``counts``."""
    counts = np.asarray(counts, dtype=np.int64)
    total = counts.sum()
    quota = target_n * counts / total
    alloc = np.maximum(np.floor(quota).astype(np.int64), floors)
    alloc = np.minimum(alloc, counts)
    # largest deficit (remainder) first; argmax breaks ties toward the lower id
    while alloc.sum() < target_n:
        deficit = np.where(alloc < counts, quota - alloc, -np.inf)
        alloc[int(np.argmax(deficit))] += 1
    while alloc.sum() > target_n:
        surplus = np.where(alloc > floors, alloc - quota, -np.inf)
        alloc[int(np.argmax(surplus))] -= 1
    return alloc


def subsample_indices(labels, n_classes, target_n, seed=0, min_per_category=2):
    """Sorted row indices of a per-category proportional sample."""
    labels = np.asarray(labels)
    counts = np.bincount(labels, minlength=n_classes)
    n = labels.shape[0]
    if target_n > n:
        raise ValueError(f"target_n={target_n} exceeds dataset size {n}")
    nonempty = int((counts > 0).sum())
    if target_n < nonempty:
        raise ValueError(f"target_n={target_n} is below the {nonempty} nonempty categories")
    if target_n == n:
        return np.arange(n)
    floors = np.minimum(counts, max(1, min_per_category))
    if floors.sum() > target_n:
        floors = np.minimum(counts, 1)
    alloc = _allocate(counts, target_n, floors)
    rng = np.random.default_rng(seed)
    picked = []
    for c in range(n_classes):
        if alloc[c]:
            members = np.flatnonzero(labels == c)
            picked.append(rng.choice(members, size=int(alloc[c]), replace=False))
    return np.sort(np.concatenate(picked))


def stratified_subsample(dataset: LabeledDataset, target_n: int, seed: int = 0,
                         min_per_category: int = 2) -> LabeledDataset:
    """Per-category proportional sample; row order of the source is kept.

    Every nonempty category keeps at least ``min(min_per_category, count)`` rows,
    so a 10-fold split still sees each category in every training split.
    """
    if target_n == dataset.n_samples:
        return dataset
    idx = subsample_indices(dataset.labels, dataset.n_classes, target_n, seed, min_per_category)
    return dataset.take(idx)


# ---------------------------------------------------------------------------
# dumps


def save_dataset(dataset: LabeledDataset, path, config: dict | None = None):
    """Write a dataset as ``.npz`` or ``.csv`` (chosen by suffix)."""
    path = os.fspath(path)
    config = config or {}
    if path.endswith(".npz"):
        np.savez_compressed(
            path,
            values=dataset.values,
            labels=dataset.labels,
            categories=np.array(dataset.categories),
            feature_names=np.array(dataset.feature_names),
            subcategory=np.array([] if dataset.subcategory is None else dataset.subcategory.astype(str)),
            config=np.array(json.dumps(config, sort_keys=True)),
        )
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(dataset.feature_names) + ["category", "subcategory"])
        subs = dataset.subcategory if dataset.subcategory is not None else [""] * dataset.n_samples
        for row, lab, sub in zip(dataset.values, dataset.labels, subs):
            w.writerow([repr(float(x)) for x in row] + [dataset.categories[lab], sub])


def load_npz(path) -> LabeledDataset:
    with np.load(path, allow_pickle=False) as z:
        sub = z["subcategory"]
        return LabeledDataset(
            FeatureMatrix(z["values"], tuple(str(s) for s in z["feature_names"])),
            z["labels"],
            tuple(str(s) for s in z["categories"]),
            sub.astype(object) if sub.size else None,
        )


def load_any(path, category_map: dict | None = None) -> LabeledDataset:
    """Load a KDD-99 text/gzip file or an ``.npz`` dump written by :func:`save_dataset`."""
    if not os.path.exists(path):
        raise KddfsError(f"input file not found: {path}")
    if os.fspath(path).endswith(".npz"):
        return load_npz(path)
    return load_kdd(path, category_map)
