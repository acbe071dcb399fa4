"""Tabular dataset loading, validation, and preprocessing.

The `Dataset` value produced here is the unit of everything downstream:
feature matrix, integer class labels, feature names, and a label -> display
name map. All operations are pure and return new Dataset values.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field, replace

import numpy as np

log = logging.getLogger("epakit")


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray          # (n, p) float64
    labels: np.ndarray            # (n,) int
    feature_names: tuple[str, ...]
    class_names: dict[int, str]
    standardized: bool = False

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=int)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("feature matrix must be n x p with n, p >= 1")
        if y.shape != (X.shape[0],):
            raise ValueError("labels length must equal the number of rows")
        if len(self.feature_names) != X.shape[1]:
            raise ValueError("feature_names length must equal the number of columns")
        if not np.all(np.isfinite(X)):
            raise ValueError("feature matrix contains NaN or Inf")
        missing = set(np.unique(y)) - set(self.class_names)
        if missing:
            raise ValueError(f"labels without class_names entry: {sorted(missing)}")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class ClassStats:
    labels: tuple[int, ...]       # sorted ascending
    names: tuple[str, ...]
    counts: tuple[int, ...]

    def count_of(self, label: int) -> int:
        return self.counts[self.labels.index(label)]

    @property
    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class Scaling:
    """Per-column offsets recorded by shift_nonnegative / standardize."""
    means: np.ndarray
    stds: np.ndarray
    dropped: tuple[str, ...] = ()


@dataclass
class PreprocessConfig:
    drop_columns: list[str] = field(default_factory=list)
    min_class_count: int = 0
    nonnegative_shift: bool = False
    standardize: bool = False


def load_csv(path, label_column: str, config: PreprocessConfig | None = None,
             class_map: dict[str, int] | None = None) -> Dataset:
    """Load a headered CSV into a Dataset.

    Columns listed in config.drop_columns are discarded; every remaining
    non-label column must parse as numeric. Class ids follow first-appearance
    order unless an explicit class_map (label text -> id) is given. The
    config's filtering / shifting / standardization steps are then applied
    in that order.
    """
    config = config or PreprocessConfig()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = None
        for row in reader:                     # skip leading comment lines
            if row and row[0].lstrip().startswith("#"):
                continue
            header = row
            break
        if header is None:
            raise ValueError(f"{path}: empty file")
        rows = list(reader)
    header = [h.strip() for h in header]
    if label_column not in header:
        raise ValueError(f"{path}: label column {label_column!r} not in header")
    for col in config.drop_columns:
        if col not in header:
            raise ValueError(f"{path}: drop column {col!r} not in header")
    if not rows:
        raise ValueError(f"{path}: no data rows")

    keep = [i for i, h in enumerate(header)
            if h != label_column and h not in config.drop_columns]
    label_idx = header.index(label_column)

    X = np.empty((len(rows), len(keep)))
    for r, row in enumerate(rows):
        for c, i in enumerate(keep):
            try:
                X[r, c] = float(row[i])
            except (ValueError, IndexError):
                raise ValueError(
                    f"{path}: row {r + 2}, column {header[i]!r}: "
                    f"cannot parse {row[i] if i < len(row) else '<missing>'!r} as a number"
                ) from None
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{path}: NaN or Inf values in numeric columns")

    raw_labels = [row[label_idx].strip() for row in rows]
    if class_map is None:
        class_map = {}
        for s in raw_labels:
            if s not in class_map:
                class_map[s] = len(class_map)
    else:
        unknown = set(raw_labels) - set(class_map)
        if unknown:
            raise ValueError(f"{path}: labels missing from class map: {sorted(unknown)}")
    y = np.array([class_map[s] for s in raw_labels], dtype=int)
    class_names = {v: k for k, v in class_map.items()}

    ds = Dataset(X, y, tuple(header[i] for i in keep), class_names)
    if config.min_class_count > 0:
        ds = filter_min_count(ds, config.min_class_count)
    if config.nonnegative_shift:
        ds, _ = shift_nonnegative(ds)
    if config.standardize:
        ds, _ = standardize(ds)
    return ds


def class_counts(ds: Dataset) -> ClassStats:
    """Observation count per class, sorted by class id."""
    labels, counts = np.unique(ds.labels, return_counts=True)
    return ClassStats(
        labels=tuple(int(v) for v in labels),
        names=tuple(ds.class_names[int(v)] for v in labels),
        counts=tuple(int(c) for c in counts),
    )


def filter_min_count(ds: Dataset, min_count: int) -> Dataset:
    """Drop rows of classes with fewer than min_count observations.

    Class ids are preserved, never renumbered, so per-class reports stay
    aligned across dataset variants.
    """
    if min_count < 0:
        raise ValueError("min_count must be >= 0")
    labels, counts = np.unique(ds.labels, return_counts=True)
    small = set(labels[counts < min_count])
    if not small:
        return ds
    mask = ~np.isin(ds.labels, sorted(small))
    if not mask.any():
        raise ValueError("filter_min_count removed every row")
    return replace(ds, features=ds.features[mask], labels=ds.labels[mask])


def shift_nonnegative(ds: Dataset) -> tuple[Dataset, np.ndarray]:
    """Shift each column with a negative minimum up to zero.

    Returns the shifted dataset and the per-column offsets that were added.
    """
    mins = ds.features.min(axis=0)
    shifts = np.where(mins < 0, -mins, 0.0)
    if not shifts.any():
        return ds, shifts
    return replace(ds, features=ds.features + shifts), shifts


def standardize(ds: Dataset) -> tuple[Dataset, Scaling]:
    """Rescale every column to mean 0, sample standard deviation 1 (n-1 divisor).

    Constant columns cannot be standardized; they are dropped and recorded in
    the returned Scaling plus a diagnostic warning.
    """
    means = ds.features.mean(axis=0)
    stds = ds.features.std(axis=0, ddof=1) if ds.n > 1 else np.zeros(ds.p)
    keep = stds > 0
    if not keep.any():
        raise ValueError("standardize: all columns are constant")
    dropped = tuple(name for name, k in zip(ds.feature_names, keep) if not k)
    if dropped:
        log.warning("standardize: dropping constant columns %s", list(dropped))
    X = (ds.features[:, keep] - means[keep]) / stds[keep]
    out = replace(
        ds,
        features=X,
        feature_names=tuple(n for n, k in zip(ds.feature_names, keep) if k),
        standardized=True,
    )
    return out, Scaling(means=means[keep], stds=stds[keep], dropped=dropped)


def select_features(ds: Dataset, names) -> Dataset:
    """Project the dataset onto the named columns, in the given order."""
    idx = []
    for name in names:
        if name not in ds.feature_names:
            raise ValueError(f"unknown feature {name!r}")
        idx.append(ds.feature_names.index(name))
    return replace(ds, features=ds.features[:, idx],
                   feature_names=tuple(names))


# Canonical NSL-KDD column layout: 41 features, class label, difficulty score.
NSLKDD_COLUMNS = (
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins",
    "logged_in", "num_compromised", "root_shell", "su_attempted", "num_root",
    "num_file_creations", "num_shells", "num_access_files", "num_outbound_cmds",
    "is_host_login", "is_guest_login", "count", "srv_count", "serror_rate",
    "srv_serror_rate", "rerror_rate", "srv_rerror_rate", "same_srv_rate",
    "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
    "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate",
    "dst_host_serror_rate", "dst_host_srv_serror_rate", "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate", "class", "difficulty",
)

NSLKDD_CATEGORICAL = ("protocol_type", "service", "flag")


def load_nslkdd(path, config: PreprocessConfig | None = None) -> Dataset:
    """Load a local NSL-KDD CSV (headerless 43-column layout or headered).

    Categorical columns and the difficulty score are always dropped, on top
    of whatever the config requests. The dataset itself is not bundled: fetch
    KDDTrain+_20Percent from the NSL-KDD distribution and point at the local
    copy.
    """
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    headerless = "duration" not in first and "class" not in first
    config = config or PreprocessConfig()
    drops = list(dict.fromkeys(
        list(NSLKDD_CATEGORICAL) + ["difficulty"] + list(config.drop_columns)))
    cfg = PreprocessConfig(
        drop_columns=drops,
        min_class_count=config.min_class_count,
        nonnegative_shift=config.nonnegative_shift,
        standardize=config.standardize,
    )
    if not headerless:
        return load_csv(path, "class", cfg)
    import tempfile, os
    with open(path, encoding="utf-8") as fh:
        body = fh.read()
    tmp = tempfile.NamedTemporaryFile(
        "w", suffix=".csv", delete=False, encoding="utf-8")
    try:
        tmp.write(",".join(NSLKDD_COLUMNS) + "\n")
        tmp.write(body)
        tmp.close()
        return load_csv(tmp.name, "class", cfg)
    finally:
        os.unlink(tmp.name)
