"""Stop-word removal and Porter stemming for tf-idf terms."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from typing import Iterable, Protocol, Sequence

from nltk.stem.porter import PorterStemmer

from .tokenize import Token, is_placeholder, is_punct, tokenize

__all__ = ["Stemmer", "CachedStemmer", "default_stemmer", "load_stopwords", "preprocess_terms", "terms_from_tokens"]


class Stemmer(Protocol):
    def stem(self, word: str) -> str: ...


class CachedStemmer:
    """Memoising wrapper; review vocabularies are small next to token counts."""

    def __init__(self, stemmer: Stemmer):
        self._stemmer = stemmer
        self._cache: dict[str, str] = {}

    def stem(self, word: str) -> str:
        try:
            return self._cache[word]
        except KeyError:
            out = self._cache[word] = self._stemmer.stem(word)
            return out


class _Porter:
    def __init__(self):
        self._impl = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)

    def stem(self, word: str) -> str:
        return self._impl.stem(word, to_lowercase=False)


@lru_cache(maxsize=1)
def default_stemmer() -> CachedStemmer:
    """Classic Porter (1980) stemmer with a memo cache."""
    return CachedStemmer(_Porter())


@lru_cache(maxsize=1)
def load_stopwords() -> frozenset[str]:
    text = resources.files("minrev.textproc").joinpath("data/stopwords.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#"))


def terms_from_tokens(
    tokens: Iterable[Token],
    stopwords: frozenset[str] | set[str] | None = None,
    stemmer: Stemmer | None = None,
) -> list[str]:
    stopwords = load_stopwords() if stopwords is None else stopwords
    stemmer = default_stemmer() if stemmer is None else stemmer
    out = []
    for tok in tokens:
        surface = tok.surface
        if is_punct(surface):
            continue
        if is_placeholder(surface):
            out.append(surface.lower())
            continue
        lower = surface.lower().replace("’", "'")
        if lower in stopwords:
            continue
        term = stemmer.stem(lower)
        # A stem can collapse onto a stop-word ("ares" -> "are").
        if term and term not in stopwords:
            out.append(term)
    return out


def preprocess_terms(
    text: str,
    stopwords: frozenset[str] | set[str] | None = None,
    stemmer: Stemmer | None = None,
) -> list[str]:
    """Tokenize, lowercase, drop punctuation and stop-words, Porter-stem.

    >>> preprocess_terms("The chairs are comfortable")
    ['chair', 'comfort']
    """
    return terms_from_tokens(tokenize(text), stopwords, stemmer)
