"""One-plus-random evaluation.

Each held-out (user, item) review becomes a case: the target item plus K
items sampled from the catalog that the user did not review in training.
The scorer ranks the K + 1 items and the target's 1-based rank feeds MRR,
Recall@N (per case) and HitRate@N (per user).
"""
from __future__ import annotations

import csv
import io
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .corpus import Dataset
from .recommender import TIE_EPS, ItemProfile, ProfileIndex, UserHistory, mostpop_scores, user_histories
from .textproc.minimize import stable_seed

__all__ = [
    "EvalCase",
    "CaseSet",
    "EvalReport",
    "build_cases",
    "Scorer",
    "ContentScorer",
    "MostPopScorer",
    "RandomScorer",
    "target_rank",
    "evaluate",
    "reports_to_csv",
    "reports_to_markdown",
]


@dataclass(frozen=True)
class EvalCase:
    user_id: str
    target_item: str
    candidates: tuple[str, ...]
    seed: int

    @property
    def items(self) -> tuple[str, ...]:
        """Target first, then candidates."""
        return (self.target_item,) + self.candidates


@dataclass(frozen=True)
class CaseSet:
    cases: tuple[EvalCase, ...]
    skipped: int = 0
    cold_targets: int = 0

    def __len__(self) -> int:
        return len(self.cases)

    def __iter__(self) -> Iterator[EvalCase]:
        return iter(self.cases)

    def __getitem__(self, i):
        return self.cases[i]


@dataclass(frozen=True)
class EvalReport:
    mrr: float
    recall_at_n: float
    hit_rate_at_n: float
    n_cases: int
    cutoff: int
    n_users: int


def _sample(rng: random.Random, catalog: Sequence[str], excluded: set[str], pool_size: int, k: int) -> list[str]:
    if pool_size < 2 * k:
        pool = [c for c in catalog if c not in excluded]
        return rng.sample(pool, k)
    # Rejection sampling is uniform without replacement over the pool and
    # avoids materialising it for every case.
    chosen: list[str] = []
    seen: set[str] = set()
    n = len(catalog)
    while len(chosen) < k:
        c = catalog[rng.randrange(n)]
        if c in excluded or c in seen:
            continue
        seen.add(c)
        chosen.append(c)
    return chosen


def build_cases(
    test: Dataset,
    train: Dataset,
    catalog: Iterable[str],
    k: int = 100,
    seed: int = 0,
    skip_cold_users: bool = False,
) -> CaseSet:
    """One case per test review whose target is in ``catalog``.

    Candidates are drawn from ``catalog`` minus the user's training items
    minus the target, from a stream seeded by ``(seed, user, target)``.
    Cases whose pool has fewer than ``k`` items are skipped and tallied, as
    are cases of users without training reviews when ``skip_cold_users``.
    """
    catalog = sorted(set(catalog))
    catalog_set = set(catalog)
    if k >= len(catalog):
        raise ValueError(f"K={k} must be smaller than the catalog ({len(catalog)} items)")
    histories = user_histories(train)
    train_items = {r.item_id for r in train}
    empty: frozenset[str] = frozenset()
    cases = []
    skipped = cold = 0
    for r in test:
        user, target = r.user_id, r.item_id
        if target not in catalog_set:
            skipped += 1
            continue
        history = histories.get(user)
        if history is None and skip_cold_users:
            skipped += 1
            continue
        seen = history.items if history is not None else empty
        excluded = set(seen)
        excluded.add(target)
        pool_size = len(catalog) - len(excluded & catalog_set)
        if pool_size < k:
            skipped += 1
            continue
        case_seed = stable_seed(seed, user, target)
        rng = random.Random(case_seed)
        candidates = _sample(rng, catalog, excluded, pool_size, k)
        if target not in train_items:
            cold += 1
        cases.append(EvalCase(user, target, tuple(candidates), case_seed))
    return CaseSet(tuple(cases), skipped, cold)


def target_rank(scores: Sequence[float], items: Sequence[str]) -> int:
    """1-based rank of ``items[0]``; ties go to the smaller item id."""
    t_score, t_item = scores[0], items[0]
    tol = TIE_EPS * max(1.0, abs(t_score))
    rank = 1
    for s, item in zip(scores[1:], items[1:]):
        d = s - t_score
        if d > tol or (d >= -tol and item < t_item):
            rank += 1
    return rank


class Scorer:
    """Scores the items of a case; ``ranks`` turns that into target ranks."""

    name = "scorer"

    def score_items(self, case: EvalCase) -> np.ndarray:
        raise NotImplementedError

    def ranks(self, cases: Sequence[EvalCase]) -> np.ndarray:
        return np.array([target_rank(self.score_items(c), c.items) for c in cases], dtype=np.int64)


class ContentScorer(Scorer):
    """Item-item tf-idf cosine score summed over the user's training items."""

    name = "content"

    def __init__(self, profiles: Mapping[str, ItemProfile], histories: Mapping[str, UserHistory], backend: str | None = None):
        self.profiles = profiles
        self.histories = histories
        self._rank_targets = kernels.BACKENDS[backend] if backend else kernels.rank_targets
        self._index = ProfileIndex(profiles)

    @classmethod
    def from_train(cls, profiles: Mapping[str, ItemProfile], train: Dataset, backend: str | None = None) -> ContentScorer:
        return cls(profiles, user_histories(train), backend)

    def _ensure(self, items: set[str]) -> ProfileIndex:
        missing = [i for i in items if i not in self._index]
        if missing:
            self._index = ProfileIndex(self.profiles, set(self._index.items) | set(missing))
        return self._index

    def score_items(self, case: EvalCase) -> np.ndarray:
        index = self._ensure(set(case.items))
        history = self.histories.get(case.user_id)
        user_vec = np.zeros(index.n_cols)
        if history is not None:
            for j in sorted(history.items):
                row = index.row_of.get(j)
                if row is None:
                    continue
                lo, hi = index.indptr[row], index.indptr[row + 1]
                np.add.at(user_vec, index.indices[lo:hi], index.data[lo:hi])
        out = np.empty(len(case.items))
        for m, item in enumerate(case.items):
            row = index.row_of[item]
            lo, hi = index.indptr[row], index.indptr[row + 1]
            out[m] = float(index.data[lo:hi] @ user_vec[index.indices[lo:hi]])
        return out

    def ranks(self, cases: Sequence[EvalCase]) -> np.ndarray:
        if not len(cases):
            return np.empty(0, dtype=np.int64)
        widths = {len(c.items) for c in cases}
        if len(widths) > 1:
            out = np.empty(len(cases), dtype=np.int64)
            for w in widths:
                pos = [n for n, c in enumerate(cases) if len(c.items) == w]
                out[pos] = self.ranks([cases[n] for n in pos])
            return out
        index = self._ensure({i for c in cases for i in c.items})
        users = sorted({c.user_id for c in cases})
        user_pos = {u: n for n, u in enumerate(users)}
        hist_ptr = [0]
        hist_rows: list[int] = []
        for u in users:
            h = self.histories.get(u)
            if h is not None:
                hist_rows.extend(sorted(index.row_of[j] for j in h.items if j in index.row_of))
            hist_ptr.append(len(hist_rows))
        case_user = np.array([user_pos[c.user_id] for c in cases], dtype=np.int64)
        case_rows = np.array([[index.row_of[i] for i in c.items] for c in cases], dtype=np.int64)
        # Group cases by user so each user vector is built once.
        order = np.argsort(case_user, kind="stable")
        ranks = self._rank_targets(
            index.indptr,
            index.indices,
            index.data,
            index.n_cols,
            np.asarray(hist_ptr, dtype=np.int64),
            np.asarray(hist_rows, dtype=np.int64),
            np.ascontiguousarray(case_user[order]),
            np.ascontiguousarray(case_rows[order]),
            TIE_EPS,
        )
        out = np.empty(len(cases), dtype=np.int64)
        out[order] = ranks
        return out


class MostPopScorer(Scorer):
    """Ranks items by their number of training reviews."""

    name = "mostpop"

    def __init__(self, counts: Mapping[str, int]):
        self.counts = counts

    @classmethod
    def from_train(cls, train: Dataset) -> MostPopScorer:
        return cls(mostpop_scores(train))

    def score_items(self, case: EvalCase) -> np.ndarray:
        return np.array([float(self.counts.get(i, 0)) for i in case.items])


class RandomScorer(Scorer):
    """I.i.d. uniform scores per (case, item), reproducible under ``seed``."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def score_items(self, case: EvalCase) -> np.ndarray:
        rng = np.random.default_rng(stable_seed("random-scorer", self.seed, case.user_id, case.target_item, case.seed))
        return rng.random(len(case.items))


def evaluate(cases: Sequence[EvalCase], scorer: Scorer, cutoff: int = 10, full_ranking_mrr: bool = False) -> EvalReport:
    """MRR, Recall@N and HitRate@N over ``cases``.

    MRR counts ``1/r`` only for ``r <= cutoff`` unless ``full_ranking_mrr``.
    Recall is the share of cases with the target in the top N; HitRate is
    the share of users with at least one such case.
    """
    cases = list(cases)
    if not cases:
        raise ValueError("evaluate needs at least one case")
    ranks = scorer.ranks(cases)
    hits = ranks <= cutoff
    if full_ranking_mrr:
        rr = 1.0 / ranks
    else:
        rr = np.where(hits, 1.0 / ranks, 0.0)
    user_hit: dict[str, bool] = defaultdict(bool)
    for case, hit in zip(cases, hits):
        user_hit[case.user_id] |= bool(hit)
    return EvalReport(
        mrr=float(rr.mean()),
        recall_at_n=float(hits.mean()),
        hit_rate_at_n=sum(user_hit.values()) / len(user_hit),
        n_cases=len(cases),
        cutoff=cutoff,
        n_users=len(user_hit),
    )


CSV_COLUMNS = ["dataset", "strategy", "mrr", "recall", "hit_rate", "n_cases", "skipped", "seed"]


def reports_to_csv(rows: Sequence[tuple[str, str, EvalReport]], skipped: int, seed: int, header: str = "") -> str:
    buf = io.StringIO()
    if header:
        buf.write(f"# {header}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for dataset, strategy, rep in rows:
        writer.writerow([dataset, strategy, f"{rep.mrr:.6f}", f"{rep.recall_at_n:.6f}", f"{rep.hit_rate_at_n:.6f}", rep.n_cases, skipped, seed])
    return buf.getvalue()


def reports_to_markdown(rows: Sequence[tuple[str, str, EvalReport]], cutoff: int, header: str = "") -> str:
    datasets = list(dict.fromkeys(d for d, _, _ in rows))
    strategies = list(dict.fromkeys(s for _, s, _ in rows))
    table = {(d, s): rep for d, s, rep in rows}
    lines = []
    if header:
        lines.append(f"<!-- {header} -->")
    top = "| Data Sets |" + "".join(f" {d} | | |" for d in datasets)
    metrics = "| Removal Strategy |" + "".join(f" MRR | Recall@{cutoff} | HitRate@{cutoff} |" for _ in datasets)
    lines += [top, "|---|" + "---:|" * (3 * len(datasets)), metrics]
    for s in strategies:
        cells = []
        for d in datasets:
            rep = table.get((d, s))
            cells += [f"{rep.mrr:.4f}", f"{rep.recall_at_n:.4f}", f"{rep.hit_rate_at_n:.4f}"] if rep else ["", "", ""]
        lines.append(f"| {s} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
