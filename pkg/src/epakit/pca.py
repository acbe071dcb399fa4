"""PCA baseline on the correlation scale.

Fitting always standardizes the data first (mean 0, sd 1, n-1 divisor), so
eigenvalues are correlation-matrix eigenvalues and the Kaiser-Guttman
"eigenvalue > 1" rule is meaningful. The eigendecomposition reuses the
Jacobi rotation machinery shared with the joint diagonalizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, standardize
from .rotations import jacobi_eigh


@dataclass
class PcaModel:
    mean: np.ndarray          # original-scale column means
    scale: np.ndarray         # original-scale column sds (n-1 divisor)
    components: np.ndarray    # (p, p) orthonormal, columns in descending eigenvalue order
    eigenvalues: np.ndarray   # descending, >= 0
    feature_names: tuple[str, ...]

    def __post_init__(self):
        p = self.components.shape[0]
        if not np.allclose(self.components.T @ self.components, np.eye(p), atol=1e-8):
            raise ValueError("components must be orthonormal")
        if (np.diff(self.eigenvalues) > 1e-10).any():
            raise ValueError("eigenvalues must be nonincreasing")

    @property
    def p(self) -> int:
        return self.components.shape[0]


def fit(ds: Dataset) -> PcaModel:
    """Eigendecomposition of the correlation matrix of the dataset.

    Accepts raw or pre-standardized data; raw data is standardized
    internally. Eigenvector signs follow a fixed convention (the
    largest-magnitude entry of each component is positive) so scores are
    reproducible.
    """
    if ds.n < 2:
        raise ValueError("need at least 2 rows to fit")
    if ds.standardized:
        std_ds = ds
        mean = np.zeros(ds.p)
        scale = np.ones(ds.p)
        names = ds.feature_names
    else:
        std_ds, scaling = standardize(ds)
        mean, scale = scaling.means, scaling.stds
        names = std_ds.feature_names
    X = std_ds.features
    C = X.T @ X / (X.shape[0] - 1)
    vals, vecs = jacobi_eigh(C)
    vals = np.clip(vals, 0.0, None)
    # sign convention: largest-magnitude entry of each component positive
    for j in range(vecs.shape[1]):
        k = int(np.argmax(np.abs(vecs[:, j])))
        if vecs[k, j] < 0:
            vecs[:, j] = -vecs[:, j]
    return PcaModel(mean=mean, scale=scale, components=vecs,
                    eigenvalues=vals, feature_names=tuple(names))


def transform(ds: Dataset, model: PcaModel, k: int) -> Dataset:
    """Project onto the first k components; output features PC1..PCk."""
    if not 1 <= k <= model.p:
        raise ValueError(f"k must be in [1, {model.p}]")
    if ds.p != model.p:
        raise ValueError("dataset/model dimension mismatch")
    X = (ds.features - model.mean) / model.scale
    scores = X @ model.components[:, :k]
    return Dataset(scores, ds.labels, tuple(f"PC{i + 1}" for i in range(k)),
                   ds.class_names)


def select_k_kaiser(model: PcaModel) -> int:
    """Number of eigenvalues strictly greater than 1 (Kaiser-Guttman rule)."""
    return int((model.eigenvalues > 1.0).sum())


def select_k_variance(model: PcaModel, frac: float) -> int:
    """Smallest k whose cumulative eigenvalue share reaches frac."""
    if not 0 < frac <= 1:
        raise ValueError("frac must be in (0, 1]")
    shares = np.cumsum(model.eigenvalues) / model.eigenvalues.sum()
    return int(np.searchsorted(shares, frac - 1e-12) + 1)


def invert(scores: Dataset, model: PcaModel, k: int) -> Dataset:
    """Reconstruct the original-scale data from k-component scores."""
    if not 1 <= k <= model.p:
        raise ValueError(f"k must be in [1, {model.p}]")
    if scores.p != k:
        raise ValueError(f"scores have {scores.p} columns, expected k={k}")
    X_std = scores.features @ model.components[:, :k].T
    X = X_std * model.scale + model.mean
    return Dataset(X, scores.labels, model.feature_names, scores.class_names)
