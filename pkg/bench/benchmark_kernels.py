"""Benchmark the compiled kernels against the pure-numpy fallback.

Run: python bench/benchmark_kernels.py
"""

import time

import numpy as np

from safs._kernels import _core_py

try:
    from safs._kernels import _core_cy
except ImportError:
    _core_cy = None


def time_fn(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_best_split(backend, m=2000, p=40, mtry=13, nodes=50):
    rng = np.random.default_rng(0)
    X = np.ascontiguousarray(rng.normal(size=(m, p)))
    y = rng.normal(size=m)
    idx = np.sort(rng.integers(0, m, size=m)).astype(np.int64)
    cands = [np.sort(rng.choice(p, size=mtry, replace=False)).astype(np.int64) for _ in range(nodes)]

    def run():
        for cand in cands:
            backend.best_split(X, y, idx, cand, 5)

    return time_fn(run)


def bench_cd_sweep(backend, m=2000, p=200, sweeps=100):
    rng = np.random.default_rng(1)
    X = rng.normal(size=(m, p))
    Xs = np.asfortranarray((X - X.mean(axis=0)) / X.std(axis=0))
    y = rng.normal(size=m)
    active = np.arange(p, dtype=np.int64)

    def run():
        beta = np.zeros(p)
        resid = (y - y.mean()).copy()
        for _ in range(sweeps):
            backend.cd_sweep(Xs, resid, beta, 0.05, active)

    return time_fn(run)


def bench_forest_fit(backend_name, m=1000, p=30, n_trees=50):
    import safs.forest as forest

    orig = forest.best_split
    backend = _core_cy if backend_name == "cython" else _core_py
    forest.best_split = backend.best_split
    try:
        rng = np.random.default_rng(2)
        X = rng.normal(size=(m, p))
        y = X[:, 0] * X[:, 1] + rng.normal(size=m)
        return time_fn(lambda: forest.fit_random_forest(X, y, n_trees=n_trees, seed=0), repeats=3)
    finally:
        forest.best_split = orig


def main():
    backends = [("python", _core_py)]
    if _core_cy is not None:
        backends.append(("cython", _core_cy))
    else:
        print("compiled backend not available; benchmarking fallback only")

    print(f"{'benchmark':<22} " + " ".join(f"{name:>10}" for name, _ in backends) + "   speedup")
    rows = [
        ("tree split scan", bench_best_split),
        ("lasso cd sweeps", bench_cd_sweep),
    ]
    for label, fn in rows:
        times = [fn(b) for _, b in backends]
        speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else ""
        print(f"{label:<22} " + " ".join(f"{t * 1e3:9.1f}ms" for t in times) + f"  {speed}")

    times = [bench_forest_fit(name) for name, _ in backends]
    speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else ""
    print(f"{'forest fit (50 trees)':<22} " + " ".join(f"{t * 1e3:9.1f}ms" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
