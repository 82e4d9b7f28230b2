"""Report file emission and re-reading.

A run produces four files in the output directory:
  report.txt         key-value summary plus tables
  architectures.csv  n,selector_setting,mean_mse (one row per grid point)
  ranking.csv        rank,feature,weight (final importance ranking)
  baseline.csv       selector_setting,mean_mse (no-representation runs)
"""

from __future__ import annotations

import os

from .pipeline import SafsReport
from .ranking import ImportanceRanking, ranking_from_csv, ranking_to_csv

REPORT_FILES = ("report.txt", "architectures.csv", "ranking.csv", "baseline.csv")


def architectures_csv(report: SafsReport) -> str:
    lines = ["n,selector_setting,mean_mse"]
    lines += [f"{r.n},{r.selector_setting},{r.mean_mse!r}" for r in report.all_results]
    return "\n".join(lines) + "\n"


def baseline_csv(report: SafsReport) -> str:
    lines = ["selector_setting,mean_mse"]
    lines += [f"{r.selector_setting},{r.mean_mse!r}" for r in report.baseline_results]
    return "\n".join(lines) + "\n"


def report_txt(report: SafsReport) -> str:
    cfg = report.config
    lines = [
        "safs-report 1",
        f"best_n = {report.best.n}",
        f"best_selector = {report.best.selector_setting}",
        f"best_mse = {report.best.mean_mse!r}",
        f"seed = {cfg.seed}",
        f"n_grid = {','.join(str(n) for n in cfg.n_grid)}",
        f"settings = {','.join(s.label for s in cfg.settings)}",
        f"cv_folds = {cfg.cv_folds}",
        f"repeats = {cfg.repeats}",
        f"top_k = {cfg.top_k}",
        f"learning_rate = {cfg.train_cfg.learning_rate!r}",
        f"epochs = {cfg.train_cfg.epochs}",
        f"batch_size = {cfg.train_cfg.batch_size}",
        f"weight_init_scale = {cfg.train_cfg.weight_init_scale!r}",
        f"wall_time_s = {report.wall_time:.3f}",
        f"failures = {len(report.failures)}",
    ]
    for n, msg in report.failures:
        lines.append(f"failure[{n}] = {msg}")
    lines.append("")
    lines.append("[architectures]")
    lines.append(architectures_csv(report).rstrip("\n"))
    lines.append("")
    lines.append("[baseline]")
    lines.append(baseline_csv(report).rstrip("\n"))
    lines.append("")
    lines.append("[ranking]")
    lines.append(ranking_to_csv(report.ranking).rstrip("\n"))
    return "\n".join(lines) + "\n"


def write_report(report: SafsReport, out_dir) -> None:
    os.makedirs(out_dir, exist_ok=True)
    files = {
        "report.txt": report_txt(report),
        "architectures.csv": architectures_csv(report),
        "ranking.csv": ranking_to_csv(report.ranking),
        "baseline.csv": baseline_csv(report),
    }
    for name, text in files.items():
        with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def read_summary(report_dir) -> tuple[dict[str, str], ImportanceRanking]:
    """Parse the key-value block of report.txt plus ranking.csv."""
    path = os.path.join(report_dir, "report.txt")
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("safs-report"):
        raise ValueError(f"{path}: not a report file")
    kv = {}
    for line in lines[1:]:
        if not line or line.startswith("["):
            break
        key, _, value = line.partition(" = ")
        kv[key] = value
    with open(os.path.join(report_dir, "ranking.csv"), encoding="utf-8") as fh:
        ranking = ranking_from_csv(fh.read())
    return kv, ranking
