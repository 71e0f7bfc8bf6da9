"""Experiment orchestration shared by the CLI subcommands."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .corpus import Dataset, DatasetError, DatasetStats, dataset_stats, load_reviews, save_reviews, temporal_split
from .evaluation import (
    ContentScorer,
    EvalReport,
    MostPopScorer,
    RandomScorer,
    build_cases,
    evaluate,
    reports_to_csv,
    reports_to_markdown,
)
from .recommender import build_profiles_multi, user_histories
from .textproc.masking import SensitiveLexicon, default_lexicon, load_lexicon
from .textproc.minimize import (
    KeepOnly,
    MinimizationStrategy,
    RandomRemoval,
    SensitiveMasking,
    Unaltered,
    WordTypeRemoval,
    minimize,
    removal_fraction,
)
from .textproc.tagging import ExternalTagger, PosTag, RuleTagger, Tagger
from .textproc.tokenize import tokenize

log = logging.getLogger(__name__)

STRATEGY_NAMES = ("unaltered", "wordtype", "random", "keeponly", "masking")
DEFAULT_STRATEGIES = ("unaltered", "random", "wordtype")


class StrategyError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    format: str | None = None
    strategies: tuple[str, ...] = DEFAULT_STRATEGIES
    k: int = 100
    cutoff: int = 10
    split: tuple[float, float, float] = (0.6, 0.2, 0.2)
    seed: int = 0
    out: str = "results"
    lexicon: str | None = None
    tagger: str = "builtin"
    mrr_full_ranking: bool = False
    skip_cold_users: bool = False

    def __post_init__(self):
        if not self.strategies:
            raise StrategyError("at least one strategy is required")
        if self.k < 1 or self.cutoff < 1:
            raise ValueError("k and cutoff must be positive")

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["strategies"] = list(self.strategies)
        d["split"] = list(self.split)
        return d

    def config_hash(self) -> str:
        """Digest of every setting that affects results (the output path does not)."""
        d = self.as_dict()
        d.pop("out")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def stamp(self) -> str:
        return f"minrev config={self.config_hash()} seed={self.seed}"


def _tags(value: str) -> frozenset[PosTag]:
    try:
        return frozenset(PosTag(t.strip().upper()) for t in value.replace(",", "+").split("+") if t.strip())
    except ValueError as exc:
        raise StrategyError(f"bad tag list {value!r}: {exc}") from None


def parse_strategy(spec: str, seed: int = 0, lexicon: SensitiveLexicon | None = None) -> MinimizationStrategy:
    """``name[:key=value;...]``, e.g. ``random:p=0.3`` or ``wordtype:tags=NOUN+PROPN``."""
    name, _, params = spec.strip().partition(":")
    name = name.lower()
    opts = {}
    for part in filter(None, params.split(";")):
        key, eq, value = part.partition("=")
        if not eq:
            raise StrategyError(f"strategy option {part!r} must look like key=value")
        opts[key.strip().lower()] = value.strip()

    def take(*allowed):
        unknown = set(opts) - set(allowed)
        if unknown:
            raise StrategyError(f"strategy {name!r} does not accept {sorted(unknown)}")

    if name == "unaltered":
        take()
        return Unaltered()
    if name == "wordtype":
        take("tags")
        return WordTypeRemoval(_tags(opts["tags"])) if "tags" in opts else WordTypeRemoval()
    if name == "keeponly":
        take("tags")
        return KeepOnly(_tags(opts["tags"])) if "tags" in opts else KeepOnly()
    if name == "random":
        take("p", "seed")
        try:
            return RandomRemoval(float(opts.get("p", 0.5)), int(opts.get("seed", seed)))
        except ValueError as exc:
            raise StrategyError(f"bad random-removal option: {exc}") from None
    if name == "masking":
        take()
        return SensitiveMasking(lexicon if lexicon is not None else default_lexicon())
    raise StrategyError(f"unknown strategy {name!r}; valid names: {', '.join(STRATEGY_NAMES)}")


def make_tagger(spec: str, dataset: Dataset) -> Tagger:
    if spec == "builtin":
        return RuleTagger()
    if spec.startswith("external:"):
        return ExternalTagger.from_file(spec.split(":", 1)[1], [r.review_id for r in dataset])
    raise ValueError(f"unknown tagger {spec!r}; use 'builtin' or 'external:<path>'")


def _lexicon(config: ExperimentConfig) -> SensitiveLexicon | None:
    return load_lexicon(config.lexicon) if config.lexicon else None


def _load(config: ExperimentConfig) -> Dataset:
    return load_reviews(config.dataset, config.format)


def run_stats(config: ExperimentConfig) -> tuple[Dataset, DatasetStats]:
    dataset = _load(config)
    if not len(dataset):
        raise DatasetError(f"{config.dataset}: dataset has no reviews")
    return dataset, dataset_stats(dataset)


def format_stats(name: str, stats: DatasetStats) -> str:
    header = ["Data set", "# Users", "# Items", "Density", "# Reviews", "# Words Per Review", "# Words Per User", "# Words Per Item"]
    row = [
        name,
        str(stats.n_users),
        str(stats.n_items),
        f"{100 * stats.density:.3f}%",
        str(stats.n_reviews),
        f"{stats.words_per_review:.2f}",
        f"{stats.words_per_user:.2f}",
        f"{stats.words_per_item:.2f}",
    ]
    return "\t".join(header) + "\n" + "\t".join(row) + "\n"


def run_minimize(config: ExperimentConfig, strategy_spec: str, out_path: str | Path) -> float:
    """Write a minimized copy of the dataset; returns the removal fraction."""
    dataset = _load(config)
    strategy = parse_strategy(strategy_spec, config.seed, _lexicon(config))
    tagger = make_tagger(config.tagger, dataset)
    if isinstance(strategy, Unaltered):
        texts = [r.text for r in dataset]
        fraction = 0.0
    else:
        texts = [minimize(tagger.tag(tokenize(r.text), r.review_id), strategy, r.review_id) for r in dataset]
        fraction = removal_fraction(dataset, strategy, tagger)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    save_reviews(dataset.replace_texts(texts), out_path, config.format)
    meta = {"stamp": config.stamp(), "config": config.as_dict(), "strategy": strategy_spec, "removal_fraction": fraction}
    Path(f"{out_path}.meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return fraction


@dataclass
class EvaluationRun:
    rows: list[tuple[str, str, EvalReport]] = field(default_factory=list)
    skipped: int = 0
    cold_targets: int = 0
    n_cases: int = 0


def run_evaluate(config: ExperimentConfig, write: bool = True) -> EvaluationRun:
    """Split once, sample one shared case set, score every condition on it."""
    dataset = _load(config)
    if not len(dataset):
        raise DatasetError(f"{config.dataset}: dataset has no reviews")
    lexicon = _lexicon(config)
    strategies = []
    for spec in config.strategies:
        strategies.append((spec, parse_strategy(spec, config.seed, lexicon)))
    tagger = make_tagger(config.tagger, dataset)
    split = temporal_split(dataset, config.split)
    cases = build_cases(split.test, split.train, dataset.items, config.k, config.seed, config.skip_cold_users)
    if not len(cases):
        raise DatasetError("no evaluation cases could be built from the test split")
    log.info("%d train / %d test reviews, %d cases (%d skipped)", len(split.train), len(split.test), len(cases), cases.skipped)

    name = dataset.name
    run = EvaluationRun(skipped=cases.skipped, cold_targets=cases.cold_targets, n_cases=len(cases))
    t0 = time.perf_counter()
    try:
        all_profiles = build_profiles_multi(split.train, [s for _, s in strategies], tagger)
    except Exception as exc:
        raise RuntimeError(f"building profiles for strategies {list(config.strategies)}: {exc}") from exc
    log.info("built profiles in %.1fs", time.perf_counter() - t0)
    histories = user_histories(split.train)
    for (spec, _), profiles in zip(strategies, all_profiles):
        try:
            report = evaluate(cases, ContentScorer(profiles, histories), config.cutoff, config.mrr_full_ranking)
        except Exception as exc:
            raise RuntimeError(f"evaluating strategy {spec!r}: {exc}") from exc
        run.rows.append((name, spec, report))
    run.rows.append((name, "mostpop", evaluate(cases, MostPopScorer.from_train(split.train), config.cutoff, config.mrr_full_ranking)))
    run.rows.append((name, "random-baseline", evaluate(cases, RandomScorer(config.seed), config.cutoff, config.mrr_full_ranking)))

    if write:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        stamp = config.stamp()
        (out / "results.csv").write_text(reports_to_csv(run.rows, run.skipped, config.seed, stamp), encoding="utf-8")
        (out / "results.md").write_text(reports_to_markdown(run.rows, config.cutoff, stamp), encoding="utf-8")
        summary = {
            "stamp": stamp,
            "config": config.as_dict(),
            "n_cases": run.n_cases,
            "skipped": run.skipped,
            "cold_targets": run.cold_targets,
            "results": [
                {"dataset": d, "strategy": s, **dataclasses.asdict(r)} for d, s, r in run.rows
            ],
        }
        (out / "run.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return run


def validate_strategies(specs: Sequence[str]) -> None:
    for spec in specs:
        parse_strategy(spec, lexicon=SensitiveLexicon())
