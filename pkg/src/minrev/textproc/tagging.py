"""Coarse part-of-speech tagging.

The default :class:`RuleTagger` needs no trained model: a closed-class word
list, a numeral pattern, capitalisation, a shipped ~10k-word lexicon of
frequent open-class words, suffix rules and a handful of contextual fixes.
:class:`ExternalTagger` replays tags produced by any other tagger from a
sidecar file.
"""
from __future__ import annotations

import enum
import logging
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from .tokenize import Token, is_numeral, is_placeholder, is_punct

log = logging.getLogger(__name__)

__all__ = [
    "PosTag",
    "Tagger",
    "RuleTagger",
    "ExternalTagger",
    "coarse_tag",
    "pos_tag",
    "default_tagger",
]


class PosTag(str, enum.Enum):
    NOUN = "NOUN"
    PROPN = "PROPN"
    PRON = "PRON"
    VERB = "VERB"
    NUM = "NUM"
    ADJ = "ADJ"
    ADV = "ADV"
    OTHER = "OTHER"
    PUNCT = "PUNCT"

    def __str__(self) -> str:
        return self.value


NOUN, PROPN, PRON, VERB, NUM, ADJ, ADV, OTHER, PUNCT = (
    PosTag.NOUN, PosTag.PROPN, PosTag.PRON, PosTag.VERB, PosTag.NUM,
    PosTag.ADJ, PosTag.ADV, PosTag.OTHER, PosTag.PUNCT,
)


class Tagger(Protocol):
    def tag(self, tokens: Sequence[Token], key: str | None = None) -> list[Token]:
        """Return ``tokens`` with every ``tag`` filled in."""


_PRONOUNS = """
i me my mine myself we us our ours ourselves you your yours yourself yourselves
he him his himself she her hers herself it its itself they them their theirs
themselves who whom whose what which whoever whatever someone somebody something
anyone anybody anything everyone everybody everything nobody nothing noone
i'm i've i'll i'd you're you've you'll you'd he's he'd he'll she's she'd she'll
it's it'll it'd we're we've we'll we'd they're they've they'll they'd that's
there's here's what's who's let's
"""
_AUXILIARIES = """
am is are was were be been being will would shall should can could may might must
isn't aren't wasn't weren't won't wouldn't shan't shouldn't can't cannot couldn't
mightn't mustn't don't doesn't didn't haven't hasn't hadn't ain't
"""
# have/do are auxiliaries only when a verb follows; see RuleTagger._context.
_HAVE_DO = "have has had having do does did"
_FUNCTION_WORDS = """
a an the this that these those some any no every each either neither both all
another such of in on at by for with about against between into through during
before after above below to from up down out off over under since without within
along across behind beyond near toward towards upon via per than like as amongst
among around onto despite except unlike and but or nor yet because although
though while if unless until whether whereas not n't 's oh wow yes yeah ok okay
please thanks thank hey hi hello um uh
"""
_CLOSED_ADVERBS = """
very too so just also only even still already really quite rather almost here
there now then never always often sometimes ever again further once soon maybe
perhaps how when where why
"""
_NUMBER_WORDS = """
zero one two three four five six seven eight nine ten eleven twelve thirteen
fourteen fifteen sixteen seventeen eighteen nineteen twenty thirty forty fifty
sixty seventy eighty ninety hundred thousand million billion dozen
"""


def _words(block: str) -> set[str]:
    return set(block.split())


CLOSED_CLASS: dict[str, PosTag] = {}
for _block, _tag in (
    (_FUNCTION_WORDS, OTHER),
    (_AUXILIARIES, OTHER),
    (_HAVE_DO, VERB),
    (_CLOSED_ADVERBS, ADV),
    (_NUMBER_WORDS, NUM),
    (_PRONOUNS, PRON),
):
    for _w in _words(_block):
        CLOSED_CLASS[_w] = _tag

_HAVE_DO_WORDS = _words(_HAVE_DO)
_DETERMINERS = _words("a an the this that these those my your his her its our their every each another no some any")
_SUBJECTS = _words("i you we they he she it who")
_VERB_TRIGGERS = _words(_AUXILIARIES) | _SUBJECTS
_SENTENCE_END = {".", "!", "?", "...", "…"}
_ADJ_CONTEXT = _words("very so too quite pretty extremely super more most less least is are was were be been seems looks feels")

_ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "ic", "ical", "less", "ish", "al")
_VERB_SUFFIXES = ("ize", "ise", "ify", "izes", "ized", "ifies", "ified")


@lru_cache(maxsize=1)
def _shipped_lexicon() -> dict[str, PosTag]:
    text = resources.files("minrev.textproc").joinpath("data/tag_lexicon.tsv").read_text(encoding="utf-8")
    return load_tag_lexicon(text.splitlines())


def load_tag_lexicon(lines: Iterable[str]) -> dict[str, PosTag]:
    lexicon = {}
    for line in lines:
        if not line.strip() or line.startswith("#"):
            continue
        word, tag = line.rstrip("\n").split("\t")
        lexicon[word] = PosTag(tag)
    return lexicon


def _suffix_tag(lower: str, prev: str | None) -> PosTag:
    if lower.endswith("ly") and len(lower) > 3:
        return ADV
    if lower.endswith(_VERB_SUFFIXES):
        return VERB
    if lower.endswith("ed") and len(lower) > 3:
        return VERB
    if lower.endswith("ing") and len(lower) > 4:
        return NOUN if prev in _DETERMINERS else VERB
    if lower.endswith(_ADJ_SUFFIXES) and len(lower) > 4:
        return ADJ
    if prev in _ADJ_CONTEXT:
        return ADJ
    return NOUN


class RuleTagger:
    """Deterministic lexicon + rule tagger over the coarse tagset."""

    def __init__(self, lexicon: dict[str, PosTag] | None = None):
        self.lexicon = _shipped_lexicon() if lexicon is None else lexicon

    def tag(self, tokens: Sequence[Token], key: str | None = None) -> list[Token]:
        tags: list[PosTag] = []
        lowers = [t.surface.lower().replace("’", "'") for t in tokens]
        at_start = True
        prev = None
        for tok, lower in zip(tokens, lowers):
            tag = self._word_tag(tok.surface, lower, prev, at_start)
            tags.append(tag)
            if tag is PUNCT:
                if tok.surface in _SENTENCE_END:
                    at_start = True
            else:
                at_start = False
                prev = lower
        self._context(lowers, tags)
        return [t.with_tag(tag) for t, tag in zip(tokens, tags)]

    def _word_tag(self, surface: str, lower: str, prev: str | None, at_start: bool) -> PosTag:
        if is_placeholder(surface):
            return OTHER
        if is_punct(surface):
            return PUNCT
        if is_numeral(surface):
            return NUM
        closed = CLOSED_CLASS.get(lower)
        if closed is not None:
            return closed
        known = self.lexicon.get(lower)
        first = surface[0]
        if first.isupper() or any(ch.isupper() for ch in surface[1:]):
            shouting = surface.isupper() and len(surface) > 1
            if shouting:
                if known is not None:
                    return known
                return PROPN
            if not at_start:
                return PROPN
        if known is not None:
            return known
        return _suffix_tag(lower, prev)

    def _context(self, lowers: list[str], tags: list[PosTag]) -> None:
        n = len(tags)
        for i in range(n):
            word, tag = lowers[i], tags[i]
            prev = lowers[i - 1] if i else None
            if word in _HAVE_DO_WORDS:
                nxt = i + 1
                while nxt < n and tags[nxt] is ADV:
                    nxt += 1
                if nxt < n and tags[nxt] is VERB and lowers[nxt] not in _HAVE_DO_WORDS:
                    tags[i] = OTHER
            elif tag is VERB and prev in _DETERMINERS and not word.endswith(("ed", "ing")):
                tags[i] = NOUN
            elif tag is NOUN and prev in _VERB_TRIGGERS and word in self.lexicon:
                # "I love it", "it works": a subject or auxiliary before a
                # lexicon noun usually means a verb reading.
                tags[i] = VERB


_UPOS = {
    "NOUN": NOUN, "PROPN": PROPN, "PRON": PRON, "VERB": VERB, "NUM": NUM,
    "ADJ": ADJ, "ADV": ADV, "PUNCT": PUNCT, "SYM": PUNCT, "OTHER": OTHER,
    "AUX": OTHER, "DET": OTHER, "ADP": OTHER, "CCONJ": OTHER, "CONJ": OTHER,
    "SCONJ": OTHER, "PART": OTHER, "INTJ": OTHER, "X": OTHER, "SPACE": PUNCT,
}


def coarse_tag(label: str) -> PosTag:
    """Map a Universal or Penn Treebank tag onto the coarse tagset."""
    label = label.strip()
    if label in _UPOS:
        return _UPOS[label]
    if label.startswith("NNP"):
        return PROPN
    if label.startswith("NN"):
        return NOUN
    if label.startswith("VB"):
        return VERB
    if label.startswith("JJ"):
        return ADJ
    if label.startswith("RB") or label == "WRB":
        return ADV
    if label == "CD":
        return NUM
    if label in ("PRP", "PRP$", "WP", "WP$", "EX"):
        return PRON
    if not any(ch.isalpha() for ch in label):
        return PUNCT
    return OTHER


class ExternalTagger:
    """Replays tags from a sidecar file written by another tagger.

    The file holds one ``surface<TAB>tag`` line per token and a blank line
    between reviews, reviews in dataset order. Tags may be Universal POS or
    Penn Treebank labels. Our tokens are aligned to the external ones by
    character position after whitespace is removed; reviews that cannot be
    aligned fall back to ``fallback``.
    """

    def __init__(self, reviews: dict[str, list[tuple[str, PosTag]]], fallback: Tagger | None = None):
        self.reviews = reviews
        self.fallback = fallback or RuleTagger()
        self.misses = 0

    @classmethod
    def from_file(cls, path: str | Path, review_ids: Sequence[str], fallback: Tagger | None = None) -> ExternalTagger:
        blocks: list[list[tuple[str, PosTag]]] = [[]]
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line.strip():
                    blocks.append([])
                    continue
                surface, sep, label = line.rpartition("\t")
                if not sep or not surface:
                    raise ValueError(f"{path}:{lineno}: expected 'surface<TAB>tag', got {line!r}")
                blocks[-1].append((surface, coarse_tag(label)))
        # A trailing blank line leaves one empty block; an empty review between
        # two blank lines is legitimate, so only strip the final one.
        if len(blocks) > len(review_ids) and not blocks[-1]:
            blocks.pop()
        if len(blocks) != len(review_ids):
            raise ValueError(f"{path}: {len(blocks)} tagged reviews for {len(review_ids)} dataset reviews")
        return cls(dict(zip(review_ids, blocks)), fallback)

    def tag(self, tokens: Sequence[Token], key: str | None = None) -> list[Token]:
        ext = self.reviews.get(key) if key is not None else None
        if ext is None:
            self.misses += 1
            return self.fallback.tag(tokens, key)
        ours = "".join(t.surface for t in tokens)
        theirs = "".join(s for s, _ in ext)
        if "".join(ours.split()) != "".join(theirs.split()):
            self.misses += 1
            log.debug("external tags for %s do not align; using fallback", key)
            return self.fallback.tag(tokens, key)
        # Character offset (whitespace-free) -> external tag.
        owner: list[PosTag] = []
        for surface, tag in ext:
            owner.extend([tag] * len("".join(surface.split())))
        out, pos = [], 0
        for tok in tokens:
            tag = PUNCT if is_punct(tok.surface) else owner[pos]
            out.append(tok.with_tag(tag))
            pos += len(tok.surface)
        return out


_DEFAULT: RuleTagger | None = None


def default_tagger() -> RuleTagger:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = RuleTagger()
    return _DEFAULT


def pos_tag(tokens: Sequence[Token], tagger: Tagger | None = None, key: str | None = None) -> list[Token]:
    return (tagger or default_tagger()).tag(tokens, key)
