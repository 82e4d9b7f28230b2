"""Lasso regression by cyclic coordinate descent with soft-thresholding.

Objective: (1/2m) ||y - X beta||^2 + lambda ||beta||_1 on standardized
columns, so lambda_max = max_j |(1/m) x_j' y_centered| has a closed form.
Coefficients and intercept are reported back on the original scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import cd_sweep
from .ranking import ImportanceRanking, make_ranking

TOL = 1e-8
MAX_SWEEPS = 10_000


@dataclass(frozen=True)
class LassoModel:
    intercept: float
    coefficients: np.ndarray  # original scale
    std_coefficients: np.ndarray  # standardized scale (importance basis)
    lam: float
    col_means: np.ndarray
    col_stds: np.ndarray
    feature_names: tuple[str, ...]

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.coefficients + self.intercept

    def n_nonzero(self) -> int:
        return int(np.count_nonzero(self.std_coefficients))


class LassoDidNotConverge(RuntimeError):
    def __init__(self, model: LassoModel, sweeps: int):
        super().__init__(f"coordinate descent did not converge in {sweeps} sweeps")
        self.model = model


def soft_threshold(z: float, lam: float) -> float:
    if z > lam:
        return z - lam
    if z < -lam:
        return z + lam
    return 0.0


def _standardize(X: np.ndarray):
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    ok = stds > 0
    Xs = np.zeros_like(X, order="F")
    Xs[:, ok] = (X[:, ok] - means[ok]) / stds[ok]
    return np.asfortranarray(Xs), means, stds, ok


def lambda_max(X: np.ndarray, y: np.ndarray) -> float:
    """Smallest penalty at which the solution is entirely zero."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    Xs, _, _, ok = _standardize(X)
    yc = y - y.mean()
    if not ok.any():
        return 0.0
    return float(np.max(np.abs(Xs.T @ yc)) / X.shape[0])


def fit_lasso(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    feature_names: tuple[str, ...] | None = None,
    warm_start: np.ndarray | None = None,
) -> LassoModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    m, p = X.shape
    if m < 2 or p < 1:
        raise ValueError("need m >= 2 rows and p >= 1 columns")
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    names = tuple(feature_names) if feature_names is not None else tuple(f"x{j}" for j in range(p))

    Xs, means, stds, ok = _standardize(X)
    ybar = y.mean()
    yc = y - ybar
    active = np.flatnonzero(ok).astype(np.int64)

    beta = np.zeros(p, dtype=np.float64)
    if warm_start is not None:
        beta[:] = warm_start
        beta[~ok] = 0.0
    resid = yc - Xs @ beta

    converged = False
    sweeps = 0
    for sweeps in range(1, MAX_SWEEPS + 1):
        max_delta = cd_sweep(Xs, resid, beta, lam, active)
        if max_delta < TOL:
            converged = True
            break

    coef = np.zeros(p, dtype=np.float64)
    coef[ok] = beta[ok] / stds[ok]
    intercept = float(ybar - means @ coef)
    model = LassoModel(intercept, coef, beta.copy(), lam, means, stds, names)
    if not converged:
        raise LassoDidNotConverge(model, sweeps)
    return model


def lasso_path(X: np.ndarray, y: np.ndarray, lambdas, feature_names=None) -> list[LassoModel]:
    """Fit one model per lambda, warm-starting each from the previous."""
    lams = list(lambdas)
    if any(b >= a for a, b in zip(lams, lams[1:])):
        raise ValueError("lambdas must be strictly descending")
    if any(l < 0 for l in lams):
        raise ValueError("lambdas must be non-negative")
    models = []
    warm = None
    for lam in lams:
        model = fit_lasso(X, y, lam, feature_names=feature_names, warm_start=warm)
        warm = model.std_coefficients
        models.append(model)
    return models


def lasso_importance(model: LassoModel) -> ImportanceRanking:
    """|standardized coefficient| as percentage weights; zeros omitted."""
    return make_ranking(list(model.feature_names), np.abs(model.std_coefficients))


def kkt_violation(model: LassoModel, X: np.ndarray, y: np.ndarray) -> float:
    """Largest KKT residual on standardized columns (diagnostic for tests)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    m = X.shape[0]
    Xs, _, stds, ok = _standardize(X)
    yc = y - y.mean()
    resid = yc - Xs @ model.std_coefficients
    grad = Xs.T @ resid / m
    worst = 0.0
    for j in range(X.shape[1]):
        if not ok[j]:
            continue
        if model.std_coefficients[j] != 0:
            worst = max(worst, abs(grad[j] - model.lam * np.sign(model.std_coefficients[j])))
        else:
            worst = max(worst, max(0.0, abs(grad[j]) - model.lam))
    return worst
