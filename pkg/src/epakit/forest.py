"""Random-forest classifier with out-of-bag accounting.

Built from scratch on numpy: Gini-split decision trees grown on bootstrap
samples, majority voting, OOB error reports, and permutation importance.
Each tree draws from its own (seed, tree index) random stream, so training
is deterministic and order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._rng import substream
from .data import Dataset


@dataclass
class RfConfig:
    n_trees: int = 500
    mtry: int | None = None        # None -> floor(sqrt(p))
    min_node_size: int = 1
    max_depth: int | None = None
    seed: int = 0

    def resolve_mtry(self, p: int) -> int:
        m = self.mtry if self.mtry is not None else max(1, int(np.sqrt(p)))
        if not 1 <= m <= p:
            raise ValueError(f"mtry must be in [1, {p}], got {m}")
        return m


@dataclass
class Tree:
    """Array-encoded binary tree. feature < 0 marks a leaf."""
    feature: np.ndarray      # (nodes,) int
    threshold: np.ndarray    # (nodes,) float
    left: np.ndarray         # (nodes,) int
    right: np.ndarray        # (nodes,) int
    value: np.ndarray        # (nodes, n_classes) training counts

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index for each row."""
        node = np.zeros(X.shape[0], dtype=int)
        while True:
            f = self.feature[node]
            active = f >= 0
            if not active.any():
                return node
            idx = np.flatnonzero(active)
            goes_left = X[idx, f[idx]] <= self.threshold[node[idx]]
            node[idx] = np.where(goes_left, self.left[node[idx]], self.right[node[idx]])

    def predict(self, X: np.ndarray) -> np.ndarray:
        # argmax breaks count ties toward the lowest class id
        return np.argmax(self.value[self.apply(X)], axis=1)


@dataclass
class Forest:
    trees: list[Tree]
    oob_masks: list[np.ndarray]    # per tree, sorted row indices not in its bootstrap
    classes: np.ndarray            # sorted class ids seen at training
    p: int

    @property
    def n_trees(self) -> int:
        return len(self.trees)


@dataclass
class OobReport:
    overall_oob: float
    labels: tuple[int, ...]
    names: tuple[str, ...]
    correct: tuple[int, ...]
    misclassified: tuple[int, ...]

    def rate(self, label: int) -> float:
        i = self.labels.index(label)
        return self.misclassified[i] / (self.correct[i] + self.misclassified[i])

    @property
    def rates(self) -> tuple[float, ...]:
        return tuple(m / (c + m) if c + m else 0.0
                     for c, m in zip(self.correct, self.misclassified))


def gini(counts) -> float:
    """Gini impurity 1 - sum((c_k / total)^2) of a class-count vector."""
    counts = np.asarray(counts, dtype=float)
    if (counts < 0).any():
        raise ValueError("negative class counts")
    total = counts.sum()
    if total == 0:
        raise ValueError("all-zero class counts")
    frac = counts / total
    return float(1.0 - np.dot(frac, frac))


def _best_split(X, y_enc, rows, n_classes, mtry, rng):
    """Best (feature, threshold, left_rows, right_rows) at a node, or None."""
    n_node = rows.size
    parent_counts = np.bincount(y_enc[rows], minlength=n_classes)
    parent_imp = gini(parent_counts)
    if parent_imp == 0.0:
        return None
    feats = rng.choice(X.shape[1], size=mtry, replace=False)

    best = None
    best_score = parent_imp - 1e-12   # require strict improvement
    for f in feats:
        v = X[rows, f]
        order = np.argsort(v, kind="mergesort")
        vs = v[order]
        cut = np.flatnonzero(vs[:-1] < vs[1:])
        if cut.size == 0:
            continue
        onehot = np.zeros((n_node, n_classes))
        onehot[np.arange(n_node), y_enc[rows][order]] = 1.0
        cum = np.cumsum(onehot, axis=0)
        nl = (cut + 1).astype(float)
        nr = n_node - nl
        cl = cum[cut]                       # left class counts at each cut
        cr = parent_counts - cl
        gl = 1.0 - np.einsum("ij,ij->i", cl / nl[:, None], cl / nl[:, None])
        gr = 1.0 - np.einsum("ij,ij->i", cr / nr[:, None], cr / nr[:, None])
        weighted = (nl * gl + nr * gr) / n_node
        k = int(np.argmin(weighted))
        if weighted[k] < best_score:
            best_score = weighted[k]
            thr = 0.5 * (vs[cut[k]] + vs[cut[k] + 1])
            best = (int(f), float(thr))
    if best is None:
        return None
    f, thr = best
    go_left = X[rows, f] <= thr
    return f, thr, rows[go_left], rows[~go_left]


def _grow_tree(X, y_enc, n_classes, cfg: RfConfig, rng) -> Tree:
    mtry = cfg.resolve_mtry(X.shape[1])
    feature, threshold, left, right, value = [], [], [], [], []

    def add_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(None)
        return len(feature) - 1

    # explicit stack keeps deep trees from hitting the recursion limit
    root = add_node()
    stack = [(root, np.arange(X.shape[0]), 0)]
    while stack:
        node, rows, depth = stack.pop()
        counts = np.bincount(y_enc[rows], minlength=n_classes)
        value[node] = counts
        if (rows.size <= cfg.min_node_size
                or (cfg.max_depth is not None and depth >= cfg.max_depth)):
            continue
        split = _best_split(X, y_enc, rows, n_classes, mtry, rng)
        if split is None:
            continue
        f, thr, lrows, rrows = split
        feature[node] = f
        threshold[node] = thr
        left[node] = add_node()
        right[node] = add_node()
        stack.append((left[node], lrows, depth + 1))
        stack.append((right[node], rrows, depth + 1))
    return Tree(
        feature=np.array(feature, dtype=int),
        threshold=np.array(threshold),
        left=np.array(left, dtype=int),
        right=np.array(right, dtype=int),
        value=np.vstack(value).astype(float),
    )


def train(ds: Dataset, cfg: RfConfig) -> Forest:
    """Grow cfg.n_trees Gini trees on independent bootstrap samples."""
    if ds.n < 2:
        raise ValueError("need at least 2 rows to train")
    classes = np.unique(ds.labels)
    if classes.size < 2:
        raise ValueError("need at least 2 classes to train")
    if cfg.n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    cfg.resolve_mtry(ds.p)
    enc = np.searchsorted(classes, ds.labels)

    trees, oob_masks = [], []
    for t in range(cfg.n_trees):
        rng = substream(cfg.seed, t)
        boot = rng.integers(0, ds.n, ds.n)
        oob = np.setdiff1d(np.arange(ds.n), boot)
        tree = _grow_tree(ds.features[boot], enc[boot], classes.size, cfg, rng)
        trees.append(tree)
        oob_masks.append(oob)
    return Forest(trees=trees, oob_masks=oob_masks, classes=classes, p=ds.p)


def predict(forest: Forest, rows: np.ndarray) -> np.ndarray:
    """Plurality vote over trees; ties break to the lowest class id."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[1] != forest.p:
        raise ValueError(f"expected {forest.p} features, got {rows.shape[1]}")
    votes = np.zeros((rows.shape[0], forest.classes.size), dtype=int)
    for tree in forest.trees:
        pred = tree.predict(rows)
        votes[np.arange(rows.shape[0]), pred] += 1
    return forest.classes[np.argmax(votes, axis=1)]


def _oob_votes(forest: Forest, X: np.ndarray) -> np.ndarray:
    """(n, n_classes) vote counts using only each row's out-of-bag trees."""
    votes = np.zeros((X.shape[0], forest.classes.size), dtype=int)
    for tree, oob in zip(forest.trees, forest.oob_masks):
        if oob.size == 0:
            continue
        pred = tree.predict(X[oob])
        votes[oob, pred] += 1
    return votes


def oob_error(forest: Forest, X: np.ndarray, y: np.ndarray) -> float:
    """Overall OOB misclassification fraction (never-OOB rows excluded)."""
    votes = _oob_votes(forest, X)
    votable = votes.sum(axis=1) > 0
    if not votable.any():
        raise ValueError("no row has out-of-bag votes")
    pred = forest.classes[np.argmax(votes[votable], axis=1)]
    return float(np.mean(pred != y[votable]))


def oob_report(forest: Forest, ds: Dataset) -> OobReport:
    """Overall and per-class OOB results for the training dataset."""
    if forest.p != ds.p:
        raise ValueError("forest/dataset feature count mismatch")
    if any(oob.size and oob.max() >= ds.n for oob in forest.oob_masks):
        raise ValueError("forest/dataset size mismatch")
    votes = _oob_votes(forest, ds.features)
    votable = votes.sum(axis=1) > 0
    pred = forest.classes[np.argmax(votes, axis=1)]
    wrong = (pred != ds.labels) & votable

    labels, names, correct, mis = [], [], [], []
    for c in forest.classes:
        in_class = (ds.labels == c) & votable
        m = int((wrong & in_class).sum())
        labels.append(int(c))
        names.append(ds.class_names.get(int(c), str(c)))
        correct.append(int(in_class.sum()) - m)
        mis.append(m)
    overall = float(wrong[votable].mean())
    return OobReport(overall_oob=overall, labels=tuple(labels),
                     names=tuple(names), correct=tuple(correct),
                     misclassified=tuple(mis))


@dataclass
class ImportanceReport:
    order: tuple[str, ...]         # feature names, most important first
    scores: dict[str, float]       # permuted OOB minus baseline OOB
    baseline_oob: float


def permutation_importance(forest: Forest, ds: Dataset, seed: int) -> ImportanceReport:
    """Rank features by the OOB error increase after permuting each column."""
    base = oob_error(forest, ds.features, ds.labels)
    scores = {}
    for j, name in enumerate(ds.feature_names):
        perm = substream(seed, j).permutation(ds.n)
        Xp = ds.features.copy()
        Xp[:, j] = Xp[perm, j]
        scores[name] = oob_error(forest, Xp, ds.labels) - base
    order = tuple(sorted(scores, key=lambda k: (-scores[k], ds.feature_names.index(k))))
    return ImportanceReport(order=order, scores=scores, baseline_oob=base)
