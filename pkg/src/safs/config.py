"""Flat key=value run configuration files.

One `key = value` per line; lists are comma-separated; `#` starts a
comment line. Paths are resolved relative to the config file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from . import autoencoder as ae
from .pipeline import LassoSetting, PipelineConfig, RandomForestSetting


class ConfigError(ValueError):
    pass


def parse_kv(path) -> dict[str, str]:
    out = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


@dataclass(frozen=True)
class RunConfig:
    input_csv: str
    schema_path: str | None
    target_name: str | None
    output_dir: str
    pipeline: PipelineConfig


def _int_list(s: str) -> list[int]:
    return [int(v.strip()) for v in s.split(",") if v.strip()]


def _float_list(s: str) -> list[float]:
    return [float(v.strip()) for v in s.split(",") if v.strip()]


def load_run_config(path, seed_override: int | None = None, out_override=None) -> RunConfig:
    kv = parse_kv(path)
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    try:
        input_csv = resolve(kv["input_csv"])
    except KeyError:
        raise ConfigError(f"{path}: missing required key 'input_csv'") from None
    schema_path = resolve(kv["schema"]) if "schema" in kv else None
    target_name = kv.get("target")
    if schema_path is None and target_name is None:
        raise ConfigError(f"{path}: need 'schema' or 'target' to designate the target column")
    output_dir = out_override or resolve(kv.get("output_dir", "safs-out"))

    seed = seed_override if seed_override is not None else int(kv.get("seed", "0"))

    selector = kv.get("selector", "rf").lower()
    if selector in ("rf", "random_forest"):
        n_trees = _int_list(kv.get("n_trees", "100"))
        min_leaf = int(kv.get("min_leaf", "5"))
        mtry = int(kv["mtry"]) if "mtry" in kv else None
        settings = tuple(RandomForestSetting(t, min_leaf=min_leaf, mtry=mtry) for t in n_trees)
    elif selector == "lasso":
        lams = _float_list(kv.get("lambdas", "0.1"))
        settings = tuple(LassoSetting(l) for l in lams)
    else:
        raise ConfigError(f"{path}: unknown selector {selector!r}")

    train_cfg = ae.TrainConfig(
        learning_rate=float(kv.get("learning_rate", "0.1")),
        epochs=int(kv.get("epochs", "500")),
        batch_size=int(kv.get("batch_size", "32")),
        weight_init_scale=float(kv.get("weight_init_scale", "0.1")),
        seed=0,  # derived per architecture by the pipeline
    )

    if "n_grid" not in kv:
        raise ConfigError(f"{path}: missing required key 'n_grid'")

    try:
        pipeline = PipelineConfig(
            n_grid=tuple(_int_list(kv["n_grid"])),
            settings=settings,
            train_cfg=train_cfg,
            cv_folds=int(kv.get("cv_folds", "5")),
            repeats=int(kv.get("repeats", "3")),
            top_k=int(kv.get("top_k", "15")),
            seed=seed,
            strict=kv.get("strict", "false").lower() in ("1", "true", "yes"),
        )
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e

    return RunConfig(input_csv, schema_path, target_name, output_dir, pipeline)
