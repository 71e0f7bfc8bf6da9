"""Command-line entry point: ``minrev {stats,minimize,evaluate}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .corpus import FORMATS, DatasetError
from .experiment import (
    DEFAULT_STRATEGIES,
    STRATEGY_NAMES,
    ExperimentConfig,
    StrategyError,
    format_stats,
    run_evaluate,
    run_minimize,
    run_stats,
    validate_strategies,
)

# Settings a config file may provide; flags given on the command line win.
_KEYS = ("dataset", "format", "strategies", "k", "cutoff", "seed", "out", "lexicon", "tagger", "mrr_full_ranking", "split", "skip_cold_users")
_BOOL = {"mrr_full_ranking", "skip_cold_users"}


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes equal underscores."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key = key.strip().lstrip("-").replace("-", "_")
        if not eq or key not in _KEYS:
            raise ValueError(f"{path}:{lineno}: expected one of {', '.join(_KEYS)} as key = value")
        values[key] = value.strip()
    return values


def _truthy(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ("1", "true", "yes", "on")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file; flags override it")
    common.add_argument("--dataset", help="review file (.json/.jsonl[.gz] Amazon format or .csv)")
    common.add_argument("--format", choices=FORMATS, help="dataset format (default: from file extension)")
    common.add_argument("--seed", type=int, help="global seed (default 0)")
    common.add_argument("--out", help="output path (directory for evaluate, file for minimize/stats)")
    common.add_argument("--lexicon", help="sensitive-term lexicon file for the masking strategy")
    common.add_argument("--tagger", help="'builtin' (default) or 'external:<path>'")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="minrev", description="Review minimization experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("stats", parents=[common], help="print dataset statistics")

    p = sub.add_parser("minimize", parents=[common], help="write a minimized copy of a dataset")
    p.add_argument("--strategy", "--strategies", dest="strategies",
                   help=f"one of {', '.join(STRATEGY_NAMES)}, optionally with options, e.g. random:p=0.5")

    p = sub.add_parser("evaluate", parents=[common], help="run the one-plus-random evaluation grid")
    p.add_argument("--strategies", help=f"comma-separated strategies (default {','.join(DEFAULT_STRATEGIES)})")
    p.add_argument("--k", type=int, help="sampled candidates per case (default 100)")
    p.add_argument("--cutoff", type=int, help="top-N cutoff (default 10)")
    p.add_argument("--split", help="train,validation,test fractions (default 0.6,0.2,0.2)")
    p.add_argument("--mrr-full-ranking", action="store_true", default=None,
                   help="MRR over the full ranking instead of only the top N")
    p.add_argument("--skip-cold-users", action="store_true", default=None,
                   help="drop cases of users with no training reviews")
    return parser


def _config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = read_config_file(args.config) if args.config else {}
    for key in _KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if not values.get("dataset"):
        raise DatasetError("--dataset is required (flag or config file)")
    kwargs: dict = {"dataset": str(values["dataset"])}
    if values.get("format"):
        kwargs["format"] = values["format"]
    if "strategies" in values:
        kwargs["strategies"] = tuple(s.strip() for s in str(values["strategies"]).split(",") if s.strip())
    for key in ("k", "cutoff", "seed"):
        if key in values:
            kwargs[key] = int(values[key])
    if "split" in values:
        kwargs["split"] = tuple(float(x) for x in str(values["split"]).split(","))
    for key in ("out", "lexicon", "tagger"):
        if values.get(key):
            kwargs[key] = str(values[key])
    for key in _BOOL:
        if key in values:
            kwargs[key] = _truthy(values[key])
    return ExperimentConfig(**kwargs)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config(args)
        if args.command in ("minimize", "evaluate"):
            try:
                validate_strategies(config.strategies)
            except StrategyError as exc:
                parser.error(str(exc))
        if args.command == "stats":
            dataset, stats = run_stats(config)
            table = format_stats(dataset.name, stats)
            sys.stdout.write(table)
            if args.out:
                Path(args.out).write_text(f"# {config.stamp()}\n{table}", encoding="utf-8")
        elif args.command == "minimize":
            if len(config.strategies) != 1:
                parser.error("minimize takes exactly one strategy")
            if not args.out:
                parser.error("minimize needs --out")
            fraction = run_minimize(config, config.strategies[0], args.out)
            print(f"removal_fraction\t{fraction:.4f}")
        else:
            run = run_evaluate(config)
            out = Path(config.out)
            sys.stdout.write((out / "results.md").read_text(encoding="utf-8"))
            print(f"cases={run.n_cases} skipped={run.skipped} cold_targets={run.cold_targets} -> {out}/results.csv")
    except (DatasetError, ValueError, OSError, RuntimeError) as exc:
        print(f"minrev: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
