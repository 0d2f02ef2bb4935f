"""Command-line front end: run one experiment, check properties, list ids.

Exit code is 0 only when every verdict of the run passes; config mistakes
(unknown keys, wrong experiment id) exit with 2 before any computation.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config, validate_config
from .experiments import EXPERIMENTS, run_experiment

# `check` without --config runs the suite on this minimal inline config;
# everything else comes from the schema defaults.
_CHECK_DEFAULTS = {
    "experiment": {"id": "property-suite", "seed": 20250819},
    "kernel": {"profile": "uniform", "radius": 1.0},
    "nonlinearity": {"kind": "kpz", "mu": 1.0},
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nldiff",
        description="nonlocal convolution-diffusion experiments: run, check, list",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment from a config file")
    p_run.add_argument("experiment_id", choices=sorted(EXPERIMENTS))
    p_run.add_argument("--config", required=True, help="path to the TOML config")
    p_run.add_argument("--out", required=True, help="directory for CSV/verdict output")
    p_run.add_argument("--threads", type=int, default=None, help="override experiment.threads")

    p_check = sub.add_parser("check", help="run the property suite (built-in defaults)")
    p_check.add_argument("--config", default=None, help="optional property-suite config")
    p_check.add_argument("--out", default=None, help="optional output directory")

    sub.add_parser("list", help="list known experiment ids")

    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            for exp_id in sorted(EXPERIMENTS):
                print(exp_id)
            return 0
        if args.command == "run":
            cfg = load_config(args.config)
            if cfg.experiment_id != args.experiment_id:
                raise ConfigError(
                    f"{args.config} declares experiment {cfg.experiment_id!r},"
                    f" not {args.experiment_id!r}"
                )
            result = run_experiment(cfg, out_dir=args.out, threads=args.threads)
        else:
            cfg = (
                load_config(args.config)
                if args.config
                else validate_config(_CHECK_DEFAULTS, source="<builtin-check>")
            )
            result = run_experiment(cfg, out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    for line in result.verdicts:
        print(line)
    conv = result.reports.get("convergence")
    if conv is not None and conv.runtimes:
        for eps, rt in zip(conv.epsilons, conv.runtimes):
            print(f"# runtime eps={eps:g}: {rt:.2f}s", file=sys.stderr)
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
