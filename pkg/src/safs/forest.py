"""Random-forest regressor with impurity-decrease importances.

Trees are grown on bootstrap samples; each split maximizes the decrease
in sum-of-squared-error over a random subset of `mtry` features. The hot
split scan lives in the kernel backend (compiled when available).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import best_split
from .ranking import ImportanceRanking, make_ranking


@dataclass(frozen=True)
class RegressionTree:
    # parallel node arrays; children indices are -1 at leaves
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    impurity_decrease: np.ndarray  # per training feature, summed over splits

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0], dtype=np.float64)
        for r in range(X.shape[0]):
            node = 0
            while self.feature[node] >= 0:
                if X[r, self.feature[node]] <= self.threshold[node]:
                    node = self.left[node]
                else:
                    node = self.right[node]
            out[r] = self.value[node]
        return out


@dataclass(frozen=True)
class RandomForest:
    trees: tuple[RegressionTree, ...]
    n_features: int
    feature_names: tuple[str, ...]
    mtry: int
    seed: int


class _TreeBuilder:
    def __init__(self, X, y, mtry, min_leaf, rng):
        self.X = X
        self.y = y
        self.p = X.shape[1]
        self.mtry = mtry
        self.min_leaf = min_leaf
        self.rng = rng
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []
        self.importance = np.zeros(self.p, dtype=np.float64)

    def build(self, idx: np.ndarray) -> int:
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        yn = self.y[idx]
        self.value.append(float(yn.mean()))

        if idx.shape[0] < 2 * self.min_leaf or np.all(yn == yn[0]):
            return node
        cand = np.sort(self.rng.choice(self.p, size=self.mtry, replace=False)).astype(np.int64)
        f, t, score = best_split(self.X, self.y, idx, cand, self.min_leaf)
        if f < 0 or score <= 0.0:
            return node
        self.importance[f] += score
        mask = self.X[idx, f] <= t
        self.feature[node] = f
        self.threshold[node] = t
        self.left[node] = self.build(idx[mask])
        self.right[node] = self.build(idx[~mask])
        return node

    def finish(self) -> RegressionTree:
        return RegressionTree(
            np.asarray(self.feature, dtype=np.int64),
            np.asarray(self.threshold, dtype=np.float64),
            np.asarray(self.left, dtype=np.int64),
            np.asarray(self.right, dtype=np.int64),
            np.asarray(self.value, dtype=np.float64),
            self.importance,
        )


def fit_random_forest(
    X: np.ndarray,
    y: np.ndarray,
    n_trees: int = 100,
    mtry: int | None = None,
    min_leaf: int = 5,
    seed: int = 0,
    bootstrap: bool = True,
    feature_names: tuple[str, ...] | None = None,
) -> RandomForest:
    """Fit a seeded regression forest.

    `bootstrap=False` is a test hook: every tree then sees the full
    sample. Per-tree seeds derive as seed + tree index, so the forest is
    independent of any fitting parallelism.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    m, p = X.shape
    if m < 2:
        raise ValueError("need at least 2 rows")
    if mtry is None:
        mtry = max(1, p // 3)
    if not 1 <= mtry <= p:
        raise ValueError(f"mtry must be in [1, {p}]")
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    names = tuple(feature_names) if feature_names is not None else tuple(f"x{j}" for j in range(p))

    trees = []
    for t in range(n_trees):
        rng = np.random.default_rng(seed + t)
        if bootstrap:
            idx = np.sort(rng.integers(0, m, size=m)).astype(np.int64)
        else:
            idx = np.arange(m, dtype=np.int64)
        builder = _TreeBuilder(X, y, mtry, min_leaf, rng)
        builder.build(idx)
        trees.append(builder.finish())
    return RandomForest(tuple(trees), p, names, mtry, seed)


def rf_predict(forest: RandomForest, X: np.ndarray) -> np.ndarray:
    """Mean of per-tree predictions."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.shape[1] != forest.n_features:
        raise ValueError(f"expected {forest.n_features} features, got {X.shape[1]}")
    acc = np.zeros(X.shape[0], dtype=np.float64)
    for tree in forest.trees:
        acc += tree.predict(X)
    return acc / len(forest.trees)


def rf_importance(forest: RandomForest) -> ImportanceRanking:
    """Impurity-decrease importance summed over all trees, as percentages."""
    raw = np.zeros(forest.n_features, dtype=np.float64)
    for tree in forest.trees:
        raw += tree.impurity_decrease
    return make_ranking(list(forest.feature_names), raw)
