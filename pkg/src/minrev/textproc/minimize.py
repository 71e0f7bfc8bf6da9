"""Review minimization strategies."""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .masking import SensitiveLexicon, mask_tokens
from .tagging import PosTag, Tagger, default_tagger
from .tokenize import Token, is_punct, tokenize

__all__ = [
    "Unaltered",
    "WordTypeRemoval",
    "RandomRemoval",
    "KeepOnly",
    "SensitiveMasking",
    "MinimizationStrategy",
    "DEFAULT_REMOVED_TAGS",
    "DEFAULT_KEPT_TAGS",
    "minimize",
    "minimize_tokens",
    "removal_fraction",
    "count_words",
    "stable_seed",
]

DEFAULT_REMOVED_TAGS = frozenset({PosTag.PRON, PosTag.PROPN, PosTag.NOUN, PosTag.VERB, PosTag.NUM})
DEFAULT_KEPT_TAGS = frozenset({PosTag.ADJ, PosTag.ADV})


def stable_seed(*parts: object) -> int:
    """64-bit seed derived from ``parts``; unlike ``hash()`` it is stable across runs."""
    digest = hashlib.blake2b("\x1f".join(map(str, parts)).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class Unaltered:
    name = "unaltered"


@dataclass(frozen=True)
class WordTypeRemoval:
    removed_tags: frozenset[PosTag] = DEFAULT_REMOVED_TAGS
    name = "wordtype"


@dataclass(frozen=True)
class RandomRemoval:
    p: float = 0.5
    seed: int = 0
    name = "random"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"removal probability must be in [0, 1], got {self.p}")


@dataclass(frozen=True)
class KeepOnly:
    kept_tags: frozenset[PosTag] = DEFAULT_KEPT_TAGS
    name = "keeponly"


@dataclass(frozen=True)
class SensitiveMasking:
    lexicon: SensitiveLexicon = field(default_factory=SensitiveLexicon)
    name = "masking"


MinimizationStrategy = Union[Unaltered, WordTypeRemoval, RandomRemoval, KeepOnly, SensitiveMasking]


def minimize_tokens(tokens: Sequence[Token], strategy: MinimizationStrategy, key: str | None = None) -> list[Token]:
    """Surviving tokens of ``tokens`` under ``strategy``.

    ``key`` identifies the review; RandomRemoval draws from a stream seeded by
    ``(strategy.seed, key)`` so the outcome does not depend on corpus order.
    Punctuation is dropped by every removal strategy.
    """
    if isinstance(strategy, Unaltered):
        return list(tokens)
    if isinstance(strategy, SensitiveMasking):
        return mask_tokens(tokens, strategy.lexicon)
    if isinstance(strategy, WordTypeRemoval):
        removed = strategy.removed_tags
        return [t for t in tokens if t.tag is not PosTag.PUNCT and t.tag not in removed and not is_punct(t.surface)]
    if isinstance(strategy, KeepOnly):
        kept = strategy.kept_tags - {PosTag.PUNCT}
        return [t for t in tokens if t.tag in kept and not is_punct(t.surface)]
    if isinstance(strategy, RandomRemoval):
        rng = random.Random(stable_seed(strategy.seed, "" if key is None else key))
        p = strategy.p
        # One draw per non-punctuation token, in order.
        return [t for t in tokens if not is_punct(t.surface) and rng.random() >= p]
    raise TypeError(f"unknown minimization strategy {strategy!r}")


def minimize(tokens: Sequence[Token], strategy: MinimizationStrategy, key: str | None = None) -> str:
    """Minimized text: the surviving surfaces joined by single spaces."""
    return " ".join(t.surface for t in minimize_tokens(tokens, strategy, key))


def count_words(tokens: Iterable[Token]) -> int:
    return sum(1 for t in tokens if not is_punct(t.surface))


def removal_fraction(reviews, strategy: MinimizationStrategy, tagger: Tagger | None = None) -> float:
    """Share of non-punctuation words removed over a whole corpus.

    ``reviews`` is any iterable of objects with ``text`` and ``review_id``
    (a :class:`~minrev.corpus.Dataset` works).
    """
    tagger = tagger or default_tagger()
    before = after = 0
    for review in reviews:
        tokens = tagger.tag(tokenize(review.text), review.review_id)
        before += count_words(tokens)
        after += count_words(minimize_tokens(tokens, strategy, review.review_id))
    return (before - after) / before if before else 0.0
