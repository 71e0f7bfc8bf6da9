"""Dictionary-based masking of privacy-sensitive terms.

Each lexicon category carries a list of word/phrase patterns and a generic
placeholder. Matches are found by longest-match search over the token
sequence and replaced by the placeholder of their category, so the review
stays readable while the personal detail is gone.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from .tagging import PosTag
from .tokenize import NUMERAL, Token, is_numeral, is_placeholder, tokenize

__all__ = ["Category", "SensitiveLexicon", "load_lexicon", "parse_lexicon", "default_lexicon", "mask_tokens", "mask_sensitive"]

NUM_MARK = "NN"
_HEADER = re.compile(r'^\[(?P<name>[^\]]+)\]\s+replacement="(?P<rep>[^"]*)"\s*$')

Matcher = Callable[[Token, str], bool]


@dataclass(frozen=True)
class Category:
    name: str
    patterns: tuple[str, ...]
    replacement: str

    def __post_init__(self):
        if not self.name.strip():
            raise ValueError("category name must be non-empty")
        if not self.replacement.strip() or any(ch.isspace() for ch in self.replacement):
            raise ValueError(f"category {self.name!r}: replacement must be a non-empty single token")
        if not self.patterns or any(not p.strip() for p in self.patterns):
            raise ValueError(f"category {self.name!r}: patterns must be non-empty")


def _token_matcher(piece: str) -> Matcher:
    if piece == NUM_MARK:
        return lambda tok, low: tok.tag is PosTag.NUM or is_numeral(tok.surface)
    if NUM_MARK in piece:
        parts = [re.escape(p.lower()) for p in piece.split(NUM_MARK)]
        rx = re.compile(f"(?:{NUMERAL.pattern})".join(parts) + r"\Z", re.VERBOSE)
        return lambda tok, low: rx.match(low) is not None
    if piece.endswith("*") and len(piece) > 1:
        prefix = piece[:-1].lower()
        return lambda tok, low: low.startswith(prefix)
    word = piece.lower()
    return lambda tok, low: low == word


def _pattern_pieces(pattern: str) -> list[str]:
    pieces = []
    for chunk in pattern.split():
        if NUM_MARK in chunk or chunk.endswith("*"):
            pieces.append(chunk)
        else:
            pieces.extend(t.surface.lower().replace("’", "'") for t in tokenize(chunk))
    return pieces


@dataclass(frozen=True)
class SensitiveLexicon:
    """Ordered categories of sensitive patterns; earlier categories win ties."""

    categories: tuple[Category, ...] = ()
    _compiled: list = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        names = [c.name for c in self.categories]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate lexicon categories in {names}")
        compiled = []
        for rank, cat in enumerate(self.categories):
            for pattern in cat.patterns:
                pieces = _pattern_pieces(pattern)
                compiled.append((len(pieces), rank, [_token_matcher(p) for p in pieces], cat.replacement))
        # Longest pattern first, then category order, so the first hit wins.
        compiled.sort(key=lambda c: (-c[0], c[1]))
        object.__setattr__(self, "_compiled", compiled)

    def __len__(self) -> int:
        return len(self.categories)

    @property
    def placeholders(self) -> set[str]:
        return {c.replacement for c in self.categories}

    def match_at(self, tokens: Sequence[Token], lowers: Sequence[str], i: int) -> tuple[int, str] | None:
        """Longest match starting at ``i`` as ``(length, replacement)``."""
        n = len(tokens)
        for length, _, matchers, replacement in self._compiled:
            if i + length > n:
                continue
            for k, m in enumerate(matchers):
                tok = tokens[i + k]
                if is_placeholder(tok.surface) or not m(tok, lowers[i + k]):
                    break
            else:
                return length, replacement
        return None


def parse_lexicon(text: str) -> SensitiveLexicon:
    categories: list[Category] = []
    name = rep = None
    patterns: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        header = _HEADER.match(line)
        if header:
            if name is not None:
                categories.append(Category(name, tuple(patterns), rep))
            name, rep, patterns = header["name"].strip(), header["rep"], []
        elif line.startswith("["):
            raise ValueError(f"line {lineno}: malformed category header {raw!r}")
        elif name is None:
            raise ValueError(f"line {lineno}: pattern outside of a category")
        else:
            patterns.append(" ".join(line.split()))
    if name is not None:
        categories.append(Category(name, tuple(patterns), rep))
    return SensitiveLexicon(tuple(categories))


def load_lexicon(path: str | Path) -> SensitiveLexicon:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


def default_lexicon() -> SensitiveLexicon:
    text = resources.files("minrev.textproc").joinpath("data/default_lexicon.txt").read_text(encoding="utf-8")
    return parse_lexicon(text)


def mask_tokens(tokens: Sequence[Token], lexicon: SensitiveLexicon) -> list[Token]:
    """Replace every matched span by a single placeholder token."""
    if not lexicon.categories:
        return list(tokens)
    lowers = [t.surface.lower().replace("’", "'") for t in tokens]
    out: list[Token] = []
    i = 0
    while i < len(tokens):
        hit = lexicon.match_at(tokens, lowers, i)
        if hit is None:
            out.append(tokens[i])
            i += 1
        else:
            length, replacement = hit
            out.append(Token(replacement, tokens[i].start, tokens[i + length - 1].end, PosTag.OTHER))
            i += length
    return out


def mask_sensitive(tokens: Sequence[Token], lexicon: SensitiveLexicon) -> str:
    return " ".join(t.surface for t in mask_tokens(tokens, lexicon))
