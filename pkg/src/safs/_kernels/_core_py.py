"""Pure-numpy implementations of the hot kernels.

Used when the compiled extension is unavailable (or when SAFS_PURE_PYTHON
is set). Both backends implement the same scan order and tie-breaking so
that fitted models agree between them.
"""

import numpy as np

BACKEND = "python"


def best_split(X, y, idx, cand, min_leaf):
    """Find the best variance-reducing split for one tree node.

    Scans candidate features in ascending index order and, per feature,
    candidate thresholds in ascending value order; a new winner must be
    strictly better, which makes ties resolve to the lowest feature index
    and then the lowest threshold.

    Returns (feature, threshold, sse_decrease) or (-1, 0.0, 0.0) when no
    split separates at least min_leaf samples on each side.
    """
    yn = y[idx]
    nn = yn.shape[0]
    best_f = -1
    best_t = 0.0
    best_score = 0.0
    if nn < 2 * min_leaf:
        return best_f, best_t, best_score
    lo = min_leaf - 1
    hi = nn - min_leaf
    for f in cand:
        v = X[idx, f]
        order = np.argsort(v, kind="stable")
        sv = v[order]
        sy = yn[order]
        pre = np.cumsum(sy)
        pre2 = np.cumsum(sy * sy)
        total = pre[-1]
        total2 = pre2[-1]
        parent_sse = total2 - total * total / nn
        # vectorized scan over candidate positions lo..hi-1
        i = np.arange(lo, hi)
        valid = sv[lo:hi] < sv[lo + 1 : hi + 1]
        if not valid.any():
            continue
        nl = (i + 1).astype(np.float64)
        nr = nn - nl
        lsse = pre2[lo:hi] - pre[lo:hi] * pre[lo:hi] / nl
        rs = total - pre[lo:hi]
        rsse = (total2 - pre2[lo:hi]) - rs * rs / nr
        score = np.where(valid, parent_sse - lsse - rsse, -np.inf)
        k = int(np.argmax(score))  # first occurrence = lowest threshold
        if score[k] > best_score:
            best_score = float(score[k])
            best_f = int(f)
            best_t = (sv[lo + k] + sv[lo + k + 1]) / 2.0
    return best_f, best_t, best_score


def cd_sweep(Xs, resid, beta, lam, active):
    """One cyclic coordinate-descent sweep for the lasso.

    Xs has standardized columns (so each column's mean square is 1), resid
    and beta are updated in place. Returns the largest absolute coefficient
    change over the sweep.
    """
    m = Xs.shape[0]
    max_delta = 0.0
    for j in active:
        xj = Xs[:, j]
        bj = beta[j]
        rho = xj @ resid / m + bj
        if rho > lam:
            bnew = rho - lam
        elif rho < -lam:
            bnew = rho + lam
        else:
            bnew = 0.0
        if bnew != bj:
            resid -= xj * (bnew - bj)
            beta[j] = bnew
            delta = abs(bnew - bj)
            if delta > max_delta:
                max_delta = delta
    return max_delta
