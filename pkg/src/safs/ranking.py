"""Importance rankings and the MSE metric."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ImportanceRanking:
    """Ordered (feature, weight) list, weights normalized to sum to 100.

    Descending by weight; ties break by feature name ascending. An empty
    ranking is valid (nothing selected)."""

    entries: tuple[tuple[str, float], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def top_k(self, k: int) -> list[str]:
        if k < 1:
            raise ValueError("k must be >= 1")
        return [name for name, _ in self.entries[:k]]


def make_ranking(names, weights) -> ImportanceRanking:
    """Normalize non-negative raw weights to percentages and sort.

    Zero-weight features are dropped; an all-zero weight vector yields an
    empty ranking."""
    weights = np.asarray(weights, dtype=np.float64)
    total = weights.sum()
    if total <= 0:
        return ImportanceRanking(())
    pct = weights * (100.0 / total)
    order = sorted(range(len(names)), key=lambda i: (-pct[i], names[i]))
    entries = tuple((names[i], float(pct[i])) for i in order if pct[i] > 0)
    return ImportanceRanking(entries)


def ranking_to_csv(r: ImportanceRanking) -> str:
    lines = ["rank,feature,weight"]
    for i, (name, w) in enumerate(r.entries, 1):
        lines.append(f"{i},{name},{w!r}")
    return "\n".join(lines) + "\n"


def ranking_from_csv(text: str) -> ImportanceRanking:
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != "rank,feature,weight":
        raise ValueError("malformed ranking CSV")
    entries = []
    for ln in lines[1:]:
        _, name, w = ln.split(",", 2)
        entries.append((name, float(w)))
    return ImportanceRanking(tuple(entries))


def mse(pred, actual) -> float:
    pred = np.asarray(pred, dtype=np.float64)
    actual = np.asarray(actual, dtype=np.float64)
    if pred.shape != actual.shape:
        raise ValueError("length mismatch")
    d = pred - actual
    return float(np.mean(d * d))
