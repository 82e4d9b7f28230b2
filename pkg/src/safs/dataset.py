"""Tabular ingestion: CSV loading, kind inference, partitioning,
min-max normalization and one-hot encoding.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

MISSING_SENTINEL = ""
MISSING_LEVEL = "__missing__"
DEFAULT_MAX_LEVELS = 10


class FeatureKind(Enum):
    CONTINUOUS = "continuous"
    CATEGORICAL = "categorical"


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class Column:
    name: str
    kind: FeatureKind
    values: np.ndarray  # float64 for continuous, object (str) for categorical
    levels: tuple[str, ...] = ()  # sorted level set, categorical only


@dataclass(frozen=True)
class Dataset:
    columns: tuple[Column, ...]
    target: np.ndarray
    target_name: str

    def __post_init__(self):
        m = self.target.shape[0]
        if m < 1:
            raise DatasetError("dataset needs at least one row")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise DatasetError("duplicate column names")
        for c in self.columns:
            if c.values.shape[0] != m:
                raise DatasetError(f"column {c.name!r} length differs from target")
            if c.kind is FeatureKind.CONTINUOUS and not np.all(np.isfinite(c.values)):
                raise DatasetError(f"non-finite values in continuous column {c.name!r}")
        if not np.all(np.isfinite(self.target)):
            raise DatasetError("non-finite target values")

    @property
    def m(self) -> int:
        return self.target.shape[0]

    @property
    def feature_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def counts(self) -> tuple[int, int]:
        """(continuous, categorical) column counts."""
        n_cont = sum(c.kind is FeatureKind.CONTINUOUS for c in self.columns)
        return n_cont, len(self.columns) - n_cont


@dataclass(frozen=True)
class FeatureMatrix:
    names: tuple[str, ...]
    kinds: tuple[FeatureKind, ...]
    data: np.ndarray  # m x p float64

    def __post_init__(self):
        p = self.data.shape[1] if self.data.ndim == 2 else -1
        if len(self.names) != p or len(self.kinds) != p:
            raise DatasetError("names/kinds/data width mismatch")
        if self.data.size and not np.all(np.isfinite(self.data)):
            raise DatasetError("non-finite entries in feature matrix")

    @property
    def p(self) -> int:
        return self.data.shape[1]

    @property
    def m(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class NormalizationParams:
    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        if np.any(self.mins > self.maxs):
            raise DatasetError("per-column min exceeds max")


def _try_float(s: str) -> float | None:
    try:
        return float(s)
    except ValueError:
        return None


def parse_schema(path) -> dict[str, str]:
    """Read a `column: continuous|categorical|target` map, one per line."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise DatasetError(f"{path}:{lineno}: expected 'name: kind'")
            name, kind = line.split(":", 1)
            kind = kind.strip().lower()
            if kind not in ("continuous", "categorical", "target"):
                raise DatasetError(f"{path}:{lineno}: unknown kind {kind!r}")
            out[name.strip()] = kind
    return out


def load_csv(
    path,
    schema: dict[str, str] | None = None,
    target: str | None = None,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> Dataset:
    """Load a CSV file into a Dataset.

    Column kinds come from `schema` where given; otherwise they are
    inferred: values that fail numeric parsing, or numeric columns with at
    most `max_levels` distinct values, become categorical. The target
    column is named via `target` or tagged `target` in the schema. Empty
    cells are imputed (column median for continuous, a dedicated level for
    categorical).
    """
    schema = dict(schema) if schema else {}
    if target is not None:
        schema[target] = "target"

    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as e:
        raise DatasetError(f"cannot read {path}: {e}") from e
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        rows = list(reader)

    if not rows:
        raise DatasetError(f"{path}: no data rows")
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise DatasetError(f"{path}: row {i + 2} has {len(row)} fields, expected {len(header)}")

    target_names = [n for n in header if schema.get(n) == "target"]
    if len(target_names) != 1:
        raise DatasetError(f"{path}: exactly one target column must be designated, got {target_names}")
    target_name = target_names[0]

    raw = {name: [row[j] for row in rows] for j, name in enumerate(header)}

    tvals = []
    for s in raw[target_name]:
        v = _try_float(s)
        if v is None:
            raise DatasetError(f"non-numeric target value {s!r}")
        tvals.append(v)
    y = np.asarray(tvals, dtype=np.float64)

    columns = []
    for name in header:
        if name == target_name:
            continue
        cells = raw[name]
        declared = schema.get(name)
        present = [c for c in cells if c != MISSING_SENTINEL]
        parsed = [_try_float(c) for c in present]
        numeric = present and all(v is not None for v in parsed)

        if declared == "continuous":
            kind = FeatureKind.CONTINUOUS
            if not numeric:
                raise DatasetError(f"column {name!r} declared continuous but has non-numeric values")
        elif declared == "categorical":
            kind = FeatureKind.CATEGORICAL
        elif numeric and len(set(parsed)) > max_levels:
            kind = FeatureKind.CONTINUOUS
        else:
            kind = FeatureKind.CATEGORICAL

        if kind is FeatureKind.CONTINUOUS:
            vals = np.array([_try_float(c) if c != MISSING_SENTINEL else np.nan for c in cells], dtype=np.float64)
            if np.isnan(vals).any():
                med = float(np.median(vals[~np.isnan(vals)]))
                vals = np.where(np.isnan(vals), med, vals)
            columns.append(Column(name, kind, vals))
        else:
            strs = np.array([c if c != MISSING_SENTINEL else MISSING_LEVEL for c in cells], dtype=object)
            levels = tuple(sorted(set(strs.tolist())))
            columns.append(Column(name, kind, strs, levels))

    return Dataset(tuple(columns), y, target_name)


def partition(d: Dataset) -> tuple[FeatureMatrix, Dataset]:
    """Split into the continuous block (as a FeatureMatrix) and a
    categorical-only Dataset slice, both preserving column order."""
    cont = [c for c in d.columns if c.kind is FeatureKind.CONTINUOUS]
    cat = [c for c in d.columns if c.kind is FeatureKind.CATEGORICAL]
    if cont:
        data = np.column_stack([c.values for c in cont]).astype(np.float64)
    else:
        data = np.empty((d.m, 0), dtype=np.float64)
    fm = FeatureMatrix(
        tuple(c.name for c in cont),
        tuple(c.kind for c in cont),
        data,
    )
    return fm, Dataset(tuple(cat), d.target, d.target_name)


def min_max_normalize(cont: FeatureMatrix) -> tuple[FeatureMatrix, NormalizationParams]:
    """Map each column into [0,1] via (x-min)/(max-min); constant columns
    map to 0.5 so the sigmoid target stays well defined."""
    if cont.p == 0:
        params = NormalizationParams(np.empty(0), np.empty(0))
        return cont, params
    mins = cont.data.min(axis=0)
    maxs = cont.data.max(axis=0)
    span = maxs - mins
    out = np.empty_like(cont.data)
    const = span == 0
    nz = ~const
    out[:, nz] = (cont.data[:, nz] - mins[nz]) / span[nz]
    out[:, const] = 0.5
    return FeatureMatrix(cont.names, cont.kinds, out), NormalizationParams(mins, maxs)


def denormalize(fm: FeatureMatrix, params: NormalizationParams) -> FeatureMatrix:
    span = params.maxs - params.mins
    out = fm.data * span + params.mins
    return FeatureMatrix(fm.names, fm.kinds, out)


def one_hot_encode(cat: Dataset, level_sets: dict[str, tuple[str, ...]] | None = None) -> FeatureMatrix:
    """Full one-hot expansion (no dropped level), columns named `col=level`.

    `level_sets` re-applies stored levels; an unseen value then raises.
    """
    names: list[str] = []
    blocks: list[np.ndarray] = []
    for c in cat.columns:
        levels = (level_sets or {}).get(c.name, c.levels)
        index = {lv: i for i, lv in enumerate(levels)}
        block = np.zeros((cat.m, len(levels)), dtype=np.float64)
        for r, v in enumerate(c.values):
            if v not in index:
                raise DatasetError(f"unseen level {v!r} in column {c.name!r}")
            block[r, index[v]] = 1.0
        names.extend(f"{c.name}={lv}" for lv in levels)
        blocks.append(block)
    data = np.hstack(blocks) if blocks else np.empty((cat.m, 0), dtype=np.float64)
    kinds = tuple(FeatureKind.CATEGORICAL for _ in names)
    return FeatureMatrix(tuple(names), kinds, data)


def recombine(represented: FeatureMatrix, encoded_cat: FeatureMatrix) -> FeatureMatrix:
    """Horizontal concatenation, represented block first."""
    if represented.m != encoded_cat.m:
        raise DatasetError(f"row counts differ: {represented.m} vs {encoded_cat.m}")
    return FeatureMatrix(
        represented.names + encoded_cat.names,
        represented.kinds + encoded_cat.kinds,
        np.hstack([represented.data, encoded_cat.data]),
    )
