"""tf-idf item profiles and the item-item content-based score.

An item's profile is the tf-idf vector of the concatenation of its
(minimized) training reviews. A user's score for item ``i`` is the sum of
cosine similarities between ``i`` and every item the user reviewed in
training.
"""
from __future__ import annotations

import functools
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from urllib.parse import quote, unquote

import numpy as np

from .corpus import Dataset
from .textproc.minimize import MinimizationStrategy, Unaltered, minimize_tokens
from .textproc.tagging import Tagger, default_tagger
from .textproc.terms import Stemmer, default_stemmer, load_stopwords, terms_from_tokens
from .textproc.tokenize import tokenize

log = logging.getLogger(__name__)

__all__ = [
    "TIE_EPS",
    "ItemProfile",
    "UserHistory",
    "ProfileIndex",
    "user_histories",
    "item_term_counts",
    "idf",
    "tfidf_profiles",
    "build_item_profiles",
    "build_profiles_multi",
    "cosine",
    "score",
    "rank",
    "mostpop_scores",
    "write_profiles",
    "read_profiles",
]

# Scores this close (relative, floor 1) are ties; summation order alone must
# not decide a ranking.
TIE_EPS = 1e-12


def is_tie(a: float, b: float) -> bool:
    return abs(a - b) <= TIE_EPS * max(1.0, a, b)


@dataclass(frozen=True)
class ItemProfile:
    item_id: str
    vector: Mapping[str, float]

    @property
    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.vector.values()))

    def __len__(self) -> int:
        return len(self.vector)


@dataclass(frozen=True)
class UserHistory:
    user_id: str
    items: frozenset[str]


def user_histories(train: Dataset) -> dict[str, UserHistory]:
    items: dict[str, set[str]] = defaultdict(set)
    for r in train:
        items[r.user_id].add(r.item_id)
    return {u: UserHistory(u, frozenset(s)) for u, s in items.items()}


def item_term_counts(
    train: Dataset,
    strategies: Sequence[MinimizationStrategy],
    tagger: Tagger | None = None,
    stopwords: frozenset[str] | None = None,
    stemmer: Stemmer | None = None,
) -> list[dict[str, Counter]]:
    """Per-strategy raw term counts of each item's concatenated training reviews.

    Every review is tokenized and tagged once and minimized separately under
    each strategy before its terms are added to its item.
    """
    tagger = tagger or default_tagger()
    stopwords = load_stopwords() if stopwords is None else stopwords
    stemmer = stemmer or default_stemmer()
    counts: list[dict[str, Counter]] = [defaultdict(Counter) for _ in strategies]
    for n, r in enumerate(train, 1):
        tokens = tagger.tag(tokenize(r.text), r.review_id) if r.text else []
        for per_item, strategy in zip(counts, strategies):
            bag = per_item[r.item_id]
            if tokens:
                bag.update(terms_from_tokens(minimize_tokens(tokens, strategy, r.review_id), stopwords, stemmer))
        if n % 50000 == 0:
            log.info("processed %d/%d training reviews", n, len(train))
    return [dict(c) for c in counts]


def idf(df: int, n_docs: int) -> float:
    """Unsmoothed natural-log inverse document frequency."""
    return math.log(n_docs / df)


def tfidf_profiles(term_counts: Mapping[str, Mapping[str, int]]) -> dict[str, ItemProfile]:
    """tf-idf weights ``count * ln(N / df)``.

    ``N`` counts the items with at least one term. Zero weights (terms that
    occur in every item) are not stored.
    """
    df: Counter[str] = Counter()
    for bag in term_counts.values():
        df.update(bag.keys())
    n_docs = sum(1 for bag in term_counts.values() if bag)
    idfs = {t: idf(d, n_docs) for t, d in df.items()}
    profiles = {}
    for item, bag in term_counts.items():
        vec = {}
        for term, tf in bag.items():
            w = tf * idfs[term]
            if w > 0.0:
                vec[term] = w
        profiles[item] = ItemProfile(item, vec)
    return profiles


def build_profiles_multi(
    train: Dataset,
    strategies: Sequence[MinimizationStrategy],
    tagger: Tagger | None = None,
    stopwords: frozenset[str] | None = None,
    stemmer: Stemmer | None = None,
) -> list[dict[str, ItemProfile]]:
    if not len(train):
        raise ValueError("cannot build item profiles from an empty training set")
    return [tfidf_profiles(c) for c in item_term_counts(train, strategies, tagger, stopwords, stemmer)]


def build_item_profiles(
    train: Dataset,
    strategy: MinimizationStrategy = Unaltered(),
    tagger: Tagger | None = None,
    stopwords: frozenset[str] | None = None,
    stemmer: Stemmer | None = None,
) -> dict[str, ItemProfile]:
    return build_profiles_multi(train, [strategy], tagger, stopwords, stemmer)[0]


def cosine(a: ItemProfile, b: ItemProfile) -> float:
    na, nb = a.norm, b.norm
    if na == 0.0 or nb == 0.0:
        return 0.0
    small, large = (a.vector, b.vector) if len(a.vector) <= len(b.vector) else (b.vector, a.vector)
    dot = sum(w * large.get(t, 0.0) for t, w in small.items())
    return min(1.0, dot / (na * nb))


def score(user: UserHistory, item_id: str, profiles: Mapping[str, ItemProfile]) -> float:
    target = profiles.get(item_id)
    if target is None:
        return 0.0
    return sum(cosine(target, profiles[j]) for j in sorted(user.items) if j in profiles)


def _order(a: tuple[str, float], b: tuple[str, float]) -> int:
    if is_tie(a[1], b[1]):
        return (a[0] > b[0]) - (a[0] < b[0])
    return -1 if a[1] > b[1] else 1


def rank(user: UserHistory, candidates: Sequence[str], profiles: Mapping[str, ItemProfile]) -> list[tuple[str, float]]:
    """Candidates by descending score, ties (see ``TIE_EPS``) by ascending item id."""
    if not candidates:
        raise ValueError("rank needs at least one candidate")
    scored = [(c, score(user, c, profiles)) for c in candidates]
    return sorted(scored, key=functools.cmp_to_key(_order))


def mostpop_scores(train: Dataset) -> Counter[str]:
    """Training review count per item (0 for unseen items)."""
    return Counter(r.item_id for r in train)


class ProfileIndex:
    """L2-normalised profiles as a CSR matrix whose rows follow item-id order.

    Row order doubles as the ranking tie-break. Items without a profile get
    an empty row.
    """

    def __init__(self, profiles: Mapping[str, ItemProfile], extra_items: Iterable[str] = ()):
        self.items = sorted(set(profiles) | set(extra_items))
        self.row_of = {item: i for i, item in enumerate(self.items)}
        vocab = sorted({t for p in profiles.values() for t in p.vector})
        col_of = {t: j for j, t in enumerate(vocab)}
        self.n_cols = len(vocab)
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for item in self.items:
            prof = profiles.get(item)
            if prof is not None and prof.vector:
                norm = prof.norm
                for term in sorted(prof.vector, key=col_of.__getitem__):
                    indices.append(col_of[term])
                    data.append(prof.vector[term] / norm)
            indptr.append(len(indices))
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.data = np.asarray(data, dtype=np.float64)

    def __contains__(self, item: str) -> bool:
        return item in self.row_of

    def __len__(self) -> int:
        return len(self.items)


def _escape(term: str) -> str:
    return quote(term, safe="")


def write_profiles(profiles: Mapping[str, ItemProfile], path: str | Path) -> None:
    """``item_id<TAB>term:weight,term:weight,...`` per line, sorted by item and term.

    Terms are percent-encoded so ``:`` and ``,`` inside them stay unambiguous.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for item in sorted(profiles):
            vec = profiles[item].vector
            entries = ",".join(f"{_escape(t)}:{vec[t]!r}" for t in sorted(vec))
            fh.write(f"{item}\t{entries}\n")


def read_profiles(path: str | Path) -> dict[str, ItemProfile]:
    profiles = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            item, sep, body = line.partition("\t")
            if not sep:
                raise ValueError(f"{path}:{lineno}: missing tab separator")
            vec = {}
            for entry in filter(None, body.split(",")):
                term, _, weight = entry.rpartition(":")
                vec[unquote(term)] = float(weight)
            profiles[item] = ItemProfile(item, vec)
    return profiles
