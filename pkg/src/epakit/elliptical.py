"""Elliptical perturbation of feature pairs.

A pair (x1, x2) of nonnegative features maps to the weighted quadratic mean
sqrt(a*x1^2 + (1-a)*x2^2) plus Gaussian noise of strength alpha. Applied
pairwise across a feature matrix this halves the dimension while making the
original pair hard to recover (the same output value lies on a whole ellipse
of inputs).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ._rng import substream
from .data import Dataset

log = logging.getLogger("epakit")


@dataclass
class EpaModel:
    """Pairing plan plus per-pair weights; defines the transform."""
    pairs: list[tuple[int, int]]
    a: np.ndarray                  # one weight per pair, in [0, 1]
    alpha: float
    passthrough: int | None = None  # unpaired trailing column, copied as-is

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        if len(self.a) != len(self.pairs):
            raise ValueError("one weight per pair required")
        if ((self.a < 0) | (self.a > 1)).any():
            raise ValueError("weights must lie in [0, 1]")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        seen = [i for pair in self.pairs for i in pair]
        if self.passthrough is not None:
            seen.append(self.passthrough)
        if len(set(seen)) != len(seen):
            raise ValueError("a column appears in more than one pair")

    @property
    def covered_columns(self) -> set[int]:
        cols = {i for pair in self.pairs for i in pair}
        if self.passthrough is not None:
            cols.add(self.passthrough)
        return cols


def consecutive_pairs(p: int) -> tuple[list[tuple[int, int]], int | None]:
    """Default pairing plan: consecutive columns, odd trailing column passed through."""
    pairs = [(2 * i, 2 * i + 1) for i in range(p // 2)]
    passthrough = p - 1 if p % 2 else None
    return pairs, passthrough


@dataclass
class EllipseParams:
    y_value: float
    a: float
    b: float
    alpha: float
    n_points: int = 200

    def __post_init__(self):
        if self.y_value <= 0:
            raise ValueError("y_value must be positive")
        if self.n_points < 1:
            raise ValueError("n_points must be >= 1")
        if self.b == 0:
            raise ValueError("b must be nonzero")
        if self.a <= 0:
            raise ValueError("a must be positive to bound the x1 range")


def pair_transform(x1, x2, a: float, alpha: float, rng=None):
    """sqrt(a*x1^2 + (1-a)*x2^2) + alpha * standard-normal noise.

    Accepts scalars or equally shaped arrays. With alpha = 0 no rng is needed
    and the result lies between min(x1, x2) and max(x1, x2).
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if (x1 < 0).any() or (x2 < 0).any():
        raise ValueError("pair_transform requires nonnegative inputs")
    if not 0 <= a <= 1:
        raise ValueError("weight a must lie in [0, 1]")
    y = np.sqrt(a * x1 * x1 + (1.0 - a) * x2 * x2)
    if alpha != 0:
        if rng is None:
            raise ValueError("alpha != 0 requires an rng")
        y = y + alpha * rng.standard_normal(y.shape)
    return float(y) if y.ndim == 0 else y


def transform(ds: Dataset, model: EpaModel, seed: int) -> Dataset:
    """Apply the pairwise elliptical map to a dataset.

    Output columns are named y1..yq, q = ceil(p/2); labels carry through.
    Noise is drawn from a per-pair stream keyed on (seed, pair), so the
    result is independent of pair evaluation order.
    """
    for j1, j2 in model.pairs:
        if j1 >= ds.p or j2 >= ds.p:
            raise ValueError(f"pair ({j1}, {j2}) out of range for p={ds.p}")
        if (ds.features[:, [j1, j2]] < 0).any():
            raise ValueError(
                f"columns {ds.feature_names[j1]!r}/{ds.feature_names[j2]!r} have "
                "negative values; apply shift_nonnegative first")
    if model.covered_columns != set(range(ds.p)):
        raise ValueError("pairing plan must cover every column exactly once")

    q = len(model.pairs) + (1 if model.passthrough is not None else 0)
    out = np.empty((ds.n, q))
    for i, (j1, j2) in enumerate(model.pairs):
        rng = substream(seed, i) if model.alpha != 0 else None
        out[:, i] = pair_transform(ds.features[:, j1], ds.features[:, j2],
                                   float(model.a[i]), model.alpha, rng)
    if model.passthrough is not None:
        out[:, -1] = ds.features[:, model.passthrough]
    return Dataset(out, ds.labels, tuple(f"y{i + 1}" for i in range(q)),
                   ds.class_names)


def ellipse_locus(params: EllipseParams, seed: int) -> np.ndarray:
    """Sample (x1, x2) points whose transform equals params.y_value.

    Per point a fresh noise value perturbs y, x1 is drawn uniformly on the
    feasible range, and x2 solves the pair equation: x2 =
    sqrt(((y - alpha*eps)^2 - a*x1^2) / b). Points with a negative radicand
    (or a noise-flipped negative y) are skipped, so fewer than n_points
    rows may come back.
    """
    rng = substream(seed)
    pts = []
    for _ in range(params.n_points):
        eps = rng.standard_normal()
        yv = params.y_value - params.alpha * eps
        if yv <= 0:
            continue
        x1 = rng.uniform(0.0, yv / math.sqrt(params.a))
        rad = (yv * yv - params.a * x1 * x1) / params.b
        if rad < 0:
            continue
        pts.append((x1, math.sqrt(rad)))
    return np.array(pts) if pts else np.empty((0, 2))


def correlation_objective(x1, x2, a: float, alpha: float, seed: int) -> float:
    """|corr(y, x1)| + |corr(y, x2)| for y = pair_transform of the columns.

    The tuning module minimizes this so the perturbed feature leaks as
    little linear information about either input as possible.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape or x1.ndim != 1 or x1.size < 3:
        raise ValueError("need two equal-length columns with at least 3 rows")
    if np.ptp(x1) == 0 or np.ptp(x2) == 0:
        raise ValueError("constant input column")
    y = pair_transform(x1, x2, a, alpha, substream(seed))
    total = 0.0
    for x in (x1, x2):
        if np.ptp(y) == 0:
            log.warning("correlation_objective: constant transformed column, "
                        "treating its correlation term as 0")
            continue
        total += abs(float(np.corrcoef(y, x)[0, 1]))
    return total
