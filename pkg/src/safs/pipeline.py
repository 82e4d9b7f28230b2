"""End-to-end workflow: partition -> normalize -> stacked-autoencoder
representation -> recombine -> selector cross-validation, swept over the
hidden-width grid, plus the un-represented baseline for comparison.
"""

from __future__ import annotations

import hashlib
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import autoencoder as ae
from . import dataset as ds
from .forest import fit_random_forest, rf_importance, rf_predict
from .lasso import fit_lasso, lasso_importance
from .ranking import ImportanceRanking, mse


def derive_seed(base: int, *tags) -> int:
    """Stable seed derivation from a base seed and purpose tags."""
    key = f"{base}|" + "|".join(str(t) for t in tags)
    digest = hashlib.sha256(key.encode()).digest()
    return int.from_bytes(digest[:8], "big") % (2**63)


@dataclass(frozen=True)
class RandomForestSetting:
    n_trees: int
    min_leaf: int = 5
    mtry: int | None = None

    @property
    def label(self) -> str:
        return f"rf:{self.n_trees}"

    def fit(self, X, y, names, seed):
        forest = fit_random_forest(
            X, y, n_trees=self.n_trees, mtry=self.mtry, min_leaf=self.min_leaf,
            seed=seed, feature_names=names,
        )
        return _FittedRF(forest)


class _FittedRF:
    def __init__(self, forest):
        self.forest = forest

    def predict(self, X):
        return rf_predict(self.forest, X)

    def importance(self):
        return rf_importance(self.forest)


@dataclass(frozen=True)
class LassoSetting:
    lam: float

    @property
    def label(self) -> str:
        return f"lasso:{self.lam:g}"

    def fit(self, X, y, names, seed):
        return _FittedLasso(fit_lasso(X, y, self.lam, feature_names=names))


class _FittedLasso:
    def __init__(self, model):
        self.model = model

    def predict(self, X):
        return self.model.predict(X)

    def importance(self):
        return lasso_importance(self.model)


@dataclass(frozen=True)
class ConstantSetting:
    """Predicts the training mean; used to validate the CV harness."""

    @property
    def label(self) -> str:
        return "constant"

    def fit(self, X, y, names, seed):
        return _FittedConstant(float(np.mean(y)))


class _FittedConstant:
    def __init__(self, value):
        self.value = value

    def predict(self, X):
        return np.full(X.shape[0], self.value)

    def importance(self):
        return ImportanceRanking(())


@dataclass(frozen=True)
class PipelineConfig:
    n_grid: tuple[int, ...]
    settings: tuple
    train_cfg: ae.TrainConfig = field(default_factory=ae.TrainConfig)
    cv_folds: int = 5
    repeats: int = 3
    top_k: int = 15
    seed: int = 0
    strict: bool = False
    refit_sae_per_fold: bool = False

    def __post_init__(self):
        if not self.n_grid or any(n < 1 for n in self.n_grid):
            raise ValueError("n_grid must be nonempty with all widths >= 1")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be >= 2")
        if self.repeats < 1 or self.top_k < 1:
            raise ValueError("repeats and top_k must be >= 1")
        if not self.settings:
            raise ValueError("at least one selector setting is required")


@dataclass(frozen=True)
class EvaluationResult:
    n: int  # 0 for baseline (no representation)
    selector_setting: str
    mean_mse: float
    per_fold_mse: tuple[float, ...]
    seed: int


@dataclass(frozen=True)
class SafsReport:
    all_results: tuple[EvaluationResult, ...]
    best: EvaluationResult
    ranking: ImportanceRanking
    baseline_results: tuple[EvaluationResult, ...]
    config: PipelineConfig
    failures: tuple[tuple[int, str], ...]
    wall_time: float


def _fold_indices(m: int, folds: int, rng: np.random.Generator):
    """Shuffled, as-equal-as-possible fold index arrays."""
    perm = rng.permutation(m)
    sizes = np.full(folds, m // folds, dtype=np.int64)
    sizes[: m % folds] += 1
    out = []
    start = 0
    for s in sizes:
        out.append(perm[start : start + s])
        start += s
    return out


def cross_validate(X, y, setting, folds: int, repeats: int, seed: int, feature_names=None):
    """Repeated k-fold CV; returns (mean_mse, per-fold list).

    The split seed derives only from (seed, repeat), so runs that share a
    seed see identical folds regardless of the model being evaluated.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    m = X.shape[0]
    if folds > m:
        raise ValueError("more folds than rows")
    names = tuple(feature_names) if feature_names is not None else tuple(f"x{j}" for j in range(X.shape[1]))
    per_fold = []
    for r in range(repeats):
        rng = np.random.default_rng(derive_seed(seed, "cv-split", r))
        for k, test_idx in enumerate(_fold_indices(m, folds, rng)):
            if test_idx.size < 1:
                raise ValueError("empty fold")
            train_mask = np.ones(m, dtype=bool)
            train_mask[test_idx] = False
            model = setting.fit(X[train_mask], y[train_mask], names, derive_seed(seed, "fit", r, k))
            per_fold.append(mse(model.predict(X[test_idx]), y[test_idx]))
    return float(np.mean(per_fold)), per_fold


def _prepare_blocks(d: ds.Dataset):
    cont, cat = ds.partition(d)
    norm, params = ds.min_max_normalize(cont)
    encoded = ds.one_hot_encode(cat)
    return cont, norm, params, encoded


def build_representation(d: ds.Dataset, n: int, cfg: PipelineConfig):
    """Train the stacked auto-encoder on the normalized continuous block
    and return (sae, recombined feature matrix).

    The middle layer has one node per continuous feature, so represented
    columns keep the original continuous feature names positionally.
    Training is unsupervised: the target never enters here.
    """
    cont, norm, _, encoded = _prepare_blocks(d)
    if norm.p == 0:
        raise ValueError("dataset has no continuous columns to represent")
    arch = ae.Architecture(norm.p, n)
    tcfg = replace(cfg.train_cfg, seed=derive_seed(cfg.seed, "sae", n) % (2**31))
    sae = ae.train_stacked(norm.data, arch, tcfg)
    rep = ae.represent(sae, norm.data)
    rep_fm = ds.FeatureMatrix(norm.names, norm.kinds, rep)
    return sae, ds.recombine(rep_fm, encoded)


def evaluate_architecture(d: ds.Dataset, n: int, cfg: PipelineConfig):
    """One grid point: represent at hidden width n, then cross-validate
    every selector setting on the recombined matrix."""
    _, combined = build_representation(d, n, cfg)
    results = []
    for setting in cfg.settings:
        mean, per_fold = cross_validate(
            combined.data, d.target, setting, cfg.cv_folds, cfg.repeats,
            cfg.seed, combined.names,
        )
        results.append(EvaluationResult(n, setting.label, mean, tuple(per_fold), cfg.seed))
    return results


def run_baseline(d: ds.Dataset, cfg: PipelineConfig):
    """Identical evaluation on un-represented (normalized) features."""
    _, norm, _, encoded = _prepare_blocks(d)
    combined = ds.recombine(norm, encoded)
    results = []
    for setting in cfg.settings:
        mean, per_fold = cross_validate(
            combined.data, d.target, setting, cfg.cv_folds, cfg.repeats,
            cfg.seed, combined.names,
        )
        results.append(EvaluationResult(0, setting.label, mean, tuple(per_fold), cfg.seed))
    return results


def _pick_best(results):
    return min(results, key=lambda r: (r.mean_mse, r.n, r.selector_setting))


def run_safs(d: ds.Dataset, cfg: PipelineConfig, threads: int = 1) -> SafsReport:
    """Sweep the architecture grid, pick the lowest cross-validated MSE,
    refit that selector on all rows for the final ranking, and attach the
    no-representation baseline."""
    t0 = time.perf_counter()
    failures: list[tuple[int, str]] = []
    by_n: dict[int, list[EvaluationResult]] = {}

    def run_one(n):
        return n, evaluate_architecture(d, n, cfg)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(_guarded, [(run_one, n, cfg.strict) for n in cfg.n_grid]))
    else:
        outcomes = [_guarded((run_one, n, cfg.strict)) for n in cfg.n_grid]

    for n, res, err in outcomes:
        if err is not None:
            failures.append((n, err))
        else:
            by_n[n] = res

    all_results = tuple(r for n in cfg.n_grid if n in by_n for r in by_n[n])
    if not all_results:
        raise RuntimeError("every architecture evaluation failed")
    best = _pick_best(all_results)

    _, combined = build_representation(d, best.n, cfg)
    setting = next(s for s in cfg.settings if s.label == best.selector_setting)
    fitted = setting.fit(combined.data, d.target, combined.names, derive_seed(cfg.seed, "final-fit", best.n))
    ranking = fitted.importance()

    baseline = run_baseline(d, cfg)
    return SafsReport(
        all_results, best, ranking, tuple(baseline), cfg,
        tuple(failures), time.perf_counter() - t0,
    )


def _guarded(job):
    fn, n, strict = job
    try:
        _, res = fn(n)
        return n, res, None
    except Exception as e:
        if strict:
            raise
        return n, None, f"{type(e).__name__}: {e}"


def select_top_k(r: ImportanceRanking, k: int):
    return r.top_k(k)
