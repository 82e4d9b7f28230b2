"""Synthetic regression benchmark generator with known relevant features.

Stands in for real clinical data during verification: the emitted sidecar
`truth.txt` lists exactly which features drive the target.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

LINKS = ("linear", "quadratic", "interaction")


@dataclass(frozen=True)
class SynthSpec:
    m: int
    p_cont: int
    p_cat: int = 0
    cat_levels: int = 3
    k_relevant: int = 1
    link: str = "linear"
    noise_std: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.k_relevant > self.p_cont:
            raise ValueError("k_relevant cannot exceed p_cont")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        if self.link not in LINKS:
            raise ValueError(f"link must be one of {LINKS}")
        if self.m < 1 or self.p_cont < 1:
            raise ValueError("need at least one row and one continuous feature")


def _apply_link(link: str, R: np.ndarray) -> np.ndarray:
    # R: m x k_relevant block of raw relevant columns; coefficients are all 1
    if link == "linear":
        return R.sum(axis=1)
    if link == "quadratic":
        return (R * R).sum(axis=1)
    # interaction: main effects plus consecutive-pair products
    y = R.sum(axis=1)
    for i in range(R.shape[1] - 1):
        y = y + R[:, i] * R[:, i + 1]
    return y


def generate(spec: SynthSpec):
    """Returns (column names, column value lists, target, relevant names)."""
    rng = np.random.default_rng(spec.seed)
    cont_names = [f"c{j}" for j in range(spec.p_cont)]
    cat_names = [f"k{j}" for j in range(spec.p_cat)]

    cont = np.empty((spec.m, spec.p_cont), dtype=np.float64)
    for j in range(spec.p_cont):
        lo = rng.uniform(-5.0, 5.0)
        width = rng.uniform(0.5, 10.0)
        cont[:, j] = rng.uniform(lo, lo + width, size=spec.m)

    levels = [f"L{i}" for i in range(spec.cat_levels)]
    cat = [[levels[i] for i in rng.integers(0, spec.cat_levels, size=spec.m)] for _ in range(spec.p_cat)]

    relevant = np.sort(rng.choice(spec.p_cont, size=spec.k_relevant, replace=False))
    y = _apply_link(spec.link, cont[:, relevant])
    if spec.noise_std > 0:
        y = y + rng.normal(0.0, spec.noise_std, size=spec.m)

    return cont_names, cont, cat_names, cat, y, [cont_names[j] for j in relevant]


def write_files(spec: SynthSpec, out_dir) -> dict[str, str]:
    """Write data.csv, schema.txt and truth.txt; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    cont_names, cont, cat_names, cat, y, truth = generate(spec)

    data_path = os.path.join(out_dir, "data.csv")
    with open(data_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cont_names + cat_names + ["y"]) + "\n")
        for r in range(spec.m):
            cells = [repr(v) for v in cont[r].tolist()]
            cells += [col[r] for col in cat]
            cells.append(repr(float(y[r])))
            fh.write(",".join(cells) + "\n")

    schema_path = os.path.join(out_dir, "schema.txt")
    with open(schema_path, "w", encoding="utf-8", newline="\n") as fh:
        for name in cont_names:
            fh.write(f"{name}: continuous\n")
        for name in cat_names:
            fh.write(f"{name}: categorical\n")
        fh.write("y: target\n")

    truth_path = os.path.join(out_dir, "truth.txt")
    with open(truth_path, "w", encoding="utf-8", newline="\n") as fh:
        for name in truth:
            fh.write(name + "\n")

    return {"data": data_path, "schema": schema_path, "truth": truth_path}
