"""Regex tokenizer that keeps character offsets into the source text."""
from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = ["Token", "tokenize", "is_numeral", "is_punct", "is_placeholder"]

_L = r"[^\W\d_]"  # any unicode letter
_APOS = "['’]"
_QUOTE = "[\"”]|''"

NUMERAL = re.compile(
    r"""
    [$£€]?\d+(?:[.,:/]\d+)*              # 12  1,000  3.5  10:30  1/2
    (?:
        {apos}\d+(?:\.\d+)?(?:{quote})?            # 5'5"   5'5
      | {apos}(?!{l})                              # 6'
      | (?:{quote})                                # 12"
      | (?:st|nd|rd|th|s)(?!{l})                   # 1st  60s
      | (?:-{l}+)+                                 # 63-year-old  3-pack
      | %
    )?
    """.format(apos=_APOS, quote=_QUOTE, l=_L),
    re.VERBOSE,
)
_NUMERAL_FULL = re.compile(rf"(?:{NUMERAL.pattern})\Z", re.VERBOSE)

_TOKEN = re.compile(
    r"""
      (?P<ph>\[[A-Z][A-Z0-9_-]*\])                     # masking placeholder
    | (?P<num>{num})
    | (?P<word>{l}+(?:{apos}{l}+)*(?:-{l}+(?:{apos}{l}+)*)*(?:\d+{l}*)?)
    | (?P<alnum>[^\W_]+)                               # mp3  i7
    | (?P<ell>\.\.\.+|…)
    | (?P<punct>[^\w\s]|_)
    """.format(num=NUMERAL.pattern, l=_L, apos=_APOS),
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    """A surface word with its half-open character span and coarse POS tag."""

    surface: str
    start: int
    end: int
    tag: str | None = None

    def with_tag(self, tag: str) -> Token:
        return Token(self.surface, self.start, self.end, tag)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens.

    Contractions (``don't``), hyphenated words and measurement strings such as
    ``5'5"`` stay single tokens; every other non-space, non-word character is a
    token of its own.

    >>> [t.surface for t in tokenize('I am 5\\'5"')]
    ['I', 'am', '5\\'5"']
    """
    return [Token(m.group(), m.start(), m.end()) for m in _TOKEN.finditer(text)]


def is_numeral(surface: str) -> bool:
    return _NUMERAL_FULL.match(surface) is not None


def is_punct(surface: str) -> bool:
    return not any(ch.isalnum() for ch in surface)


def is_placeholder(surface: str) -> bool:
    return len(surface) > 2 and surface[0] == "[" and surface[-1] == "]" and surface[1:-1].replace("-", "").replace("_", "").isalnum()
