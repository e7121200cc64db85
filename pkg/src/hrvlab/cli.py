"""Command-line interface.

Subcommands::

    hrvlab generate   --spec spec.json | --experiment NAME  --n N --seed S --out pairs.csv
    hrvlab detect     --in pairs.csv --out reportdir [--q Q ...] [--thresholds 100,400]
                      [--rank-mode none|literal|pareto] [--k-min K] [--k-max K] [--k-step K]
    hrvlab experiment --experiment NAME --seed S [--n N] [--replications R] [--out dir]

Every subcommand also accepts ``--config FILE`` (a JSON object with the
same knobs; explicit flags override it). Exit codes: 0 success, 1 usage
or configuration error, 2 data/domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .core import DomainError, TOOL_VERSION, UsageError
from .diagnostics import RANK_MODES
from .generators import spec_from_json
from .pipeline import (
    EXPERIMENTS,
    RunConfig,
    get_experiment,
    run_detect,
    run_experiment,
    run_generate,
)

__all__ = ["build_parser", "main", "entrypoint"]


class _Parser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting with code 2."""

    def error(self, message: str):  # noqa: D401 - argparse hook
        raise UsageError(message)


def _parse_thresholds(text: str) -> tuple:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise UsageError(f"--thresholds expects comma-separated integers, got {text!r}") from None
    if not values:
        raise UsageError("--thresholds expects at least one integer")
    return values


def _load_spec_file(path: str):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"spec file not found: {path}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise UsageError(f"{path}: invalid spec JSON ({exc})") from exc
    return spec_from_json(doc)


def build_parser() -> _Parser:
    parser = _Parser(prog="hrvlab", description="Bivariate heavy-tail simulation and diagnostics.")
    parser.add_argument("--version", action="version", version=f"hrvlab {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command")

    g = sub.add_parser("generate", help="draw a bivariate batch and write it as CSV")
    g.add_argument("--spec", help="generator spec JSON file")
    g.add_argument("--experiment", choices=sorted(EXPERIMENTS), help="use a registered spec")
    g.add_argument("--n", type=int, help="sample size")
    g.add_argument("--seed", type=int, help="base RNG seed")
    g.add_argument("--out", required=True, help="output CSV path")
    g.add_argument("--config", help="JSON run-config file")

    d = sub.add_parser("detect", help="run the diagnostic battery on a pairs CSV")
    d.add_argument("--in", dest="input", required=True, help="input pairs CSV")
    d.add_argument("--out", required=True, help="report output directory")
    d.add_argument("--q", type=float, action="append", help="Pickandsish quantile (repeatable)")
    d.add_argument("--thresholds", help="comma-separated ratio thresholds, e.g. 100,400")
    d.add_argument("--rank-mode", choices=RANK_MODES, dest="rank_mode")
    d.add_argument("--k-min", type=int, dest="k_min")
    d.add_argument("--k-max", type=int, dest="k_max")
    d.add_argument("--k-step", type=int, dest="k_step")
    d.add_argument("--config", help="JSON run-config file")

    e = sub.add_parser("experiment", help="run a registered replicated study")
    e.add_argument("--experiment", choices=sorted(EXPERIMENTS), help="experiment name")
    e.add_argument("--n", type=int, help="override the registered sample size")
    e.add_argument("--seed", type=int, help="base RNG seed")
    e.add_argument("--replications", type=int, help="number of replications (default 1)")
    e.add_argument("--out", help="output directory for summary.json and per-rep reports")
    e.add_argument("--config", help="JSON run-config file")

    return parser


def _merged_config(args: argparse.Namespace) -> RunConfig:
    base = RunConfig.from_json_file(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = RunConfig(
        n=getattr(args, "n", None),
        seed=getattr(args, "seed", None),
        experiment=getattr(args, "experiment", None),
        replications=getattr(args, "replications", None),
        q_list=tuple(args.q) if getattr(args, "q", None) else None,
        thresholds=(
            _parse_thresholds(args.thresholds) if getattr(args, "thresholds", None) else None
        ),
        rank_mode=getattr(args, "rank_mode", None),
        k_min=getattr(args, "k_min", None),
        k_max=getattr(args, "k_max", None),
        k_step=getattr(args, "k_step", None),
        spec=_load_spec_file(args.spec) if getattr(args, "spec", None) else None,
    )
    return base.merged_with(overrides)


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"missing required {flag} (flag or config key)")
    return value


def _cmd_generate(args: argparse.Namespace) -> int:
    cfg = _merged_config(args)
    if cfg.spec is not None and cfg.experiment is not None:
        raise UsageError("give either --spec or --experiment, not both")
    if cfg.spec is not None:
        spec = cfg.spec
        n = _require(cfg.n, "--n")
    elif cfg.experiment is not None:
        exp = get_experiment(cfg.experiment)
        spec = exp.spec
        n = cfg.n if cfg.n is not None else exp.n
    else:
        raise UsageError("generate needs a --spec file or an --experiment name")
    seed = _require(cfg.seed, "--seed")
    csv_path, meta_path = run_generate(spec, int(n), int(seed), args.out)
    print(f"wrote {csv_path} ({int(n)} rows) and {meta_path}")
    return 0


def _cmd_detect(args: argparse.Namespace) -> int:
    cfg = _merged_config(args)
    report = run_detect(args.input, cfg.detect_config(), out_dir=args.out)
    print(
        f"wrote {Path(args.out) / 'report.json'} "
        f"({len(report.series)} series, {len(report.densities)} densities)"
    )
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    cfg = _merged_config(args)
    name = _require(cfg.experiment, "--experiment")
    seed = _require(cfg.seed, "--seed")
    summary = run_experiment(
        name,
        int(seed),
        replications=cfg.replications if cfg.replications is not None else 1,
        n=cfg.n,
        out_dir=args.out,
    )
    print(json.dumps({"experiment": name, "medians": summary.medians}, sort_keys=True))
    if args.out:
        print(f"wrote {Path(args.out) / 'summary.json'}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "detect": _cmd_detect,
    "experiment": _cmd_experiment,
}


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand (generate, detect, or experiment)")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hrvlab: error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"hrvlab: error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())
