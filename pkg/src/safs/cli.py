"""Command-line front end.

Subcommands: synth (generate a verification dataset), run (full sweep),
baseline (no-representation runs only), report (summarize a run
directory). Exit codes: 0 success, 1 configuration error, 2 runtime
failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import dataset as ds
from .config import ConfigError, load_run_config
from .pipeline import run_baseline, run_safs
from .report import read_summary, write_report
from .synth import SynthSpec, write_files

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _default_threads() -> int:
    env = os.environ.get("SAFS_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="safs")
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset with known truth")
    p_synth.add_argument("--rows", type=int, required=True)
    p_synth.add_argument("--cont", type=int, required=True, help="continuous feature count")
    p_synth.add_argument("--cat", type=int, default=0, help="categorical feature count")
    p_synth.add_argument("--cat-levels", type=int, default=3)
    p_synth.add_argument("--relevant", type=int, default=1)
    p_synth.add_argument("--link", choices=("linear", "quadratic", "interaction"), default="linear")
    p_synth.add_argument("--noise", type=float, default=0.0)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True, help="output directory")

    for name in ("run", "baseline"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None, help="override output directory")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--dry-run", action="store_true")

    p_report = sub.add_parser("report", help="summarize a run output directory")
    p_report.add_argument("report_dir")
    p_report.add_argument("--top-k", type=int, default=15)

    return parser


def _load_dataset(rc):
    if not os.path.exists(rc.input_csv):
        raise ConfigError(f"input file not found: {rc.input_csv}")
    schema = None
    if rc.schema_path is not None:
        if not os.path.exists(rc.schema_path):
            raise ConfigError(f"schema file not found: {rc.schema_path}")
        schema = ds.parse_schema(rc.schema_path)
    return ds.load_csv(rc.input_csv, schema=schema, target=rc.target_name)


def cmd_synth(args) -> int:
    spec = SynthSpec(
        m=args.rows, p_cont=args.cont, p_cat=args.cat, cat_levels=args.cat_levels,
        k_relevant=args.relevant, link=args.link, noise_std=args.noise, seed=args.seed,
    )
    paths = write_files(spec, args.out)
    print(f"wrote {paths['data']}")
    return EXIT_OK


def cmd_run(args, baseline_only: bool = False) -> int:
    rc = load_run_config(args.config, seed_override=args.seed, out_override=args.out)
    threads = args.threads if args.threads is not None else _default_threads()
    cfg = rc.pipeline

    if args.dry_run:
        print(f"grid: {len(cfg.n_grid)} architectures x {len(cfg.settings)} settings "
              f"= {len(cfg.n_grid) * len(cfg.settings)} evaluations")
        return EXIT_OK

    d = _load_dataset(rc)
    os.makedirs(rc.output_dir, exist_ok=True)
    if baseline_only:
        results = run_baseline(d, cfg)
        out_path = os.path.join(rc.output_dir, "baseline.csv")
        lines = ["selector_setting,mean_mse"]
        lines += [f"{r.selector_setting},{r.mean_mse!r}" for r in results]
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"wrote {out_path}")
    else:
        report = run_safs(d, cfg, threads=threads)
        write_report(report, rc.output_dir)
        print(f"best n={report.best.n} setting={report.best.selector_setting} "
              f"mse={report.best.mean_mse!r}")
        print(f"wrote reports to {rc.output_dir}")
    return EXIT_OK


def cmd_report(args) -> int:
    kv, ranking = read_summary(args.report_dir)
    print(f"best architecture: n={kv['best_n']} selector={kv['best_selector']}")
    print(f"best MSE: {kv['best_mse']}")
    print()
    if not len(ranking):
        print("(no features selected)")
        return EXIT_OK
    entries = ranking.entries[: args.top_k]
    width = max(len(name) for name, _ in entries)
    print(f"{'rank':>4}  {'feature':<{width}}  weight")
    for i, (name, w) in enumerate(entries, 1):
        print(f"{i:>4}  {name:<{width}}  {w:.2f}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            return cmd_synth(args)
        if args.command == "run":
            return cmd_run(args)
        if args.command == "baseline":
            return cmd_run(args, baseline_only=True)
        if args.command == "report":
            return cmd_report(args)
        return EXIT_CONFIG
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
