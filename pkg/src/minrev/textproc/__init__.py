"""Tokenization, POS tagging, minimization and masking of review text."""
from .masking import Category, SensitiveLexicon, default_lexicon, load_lexicon, mask_sensitive, mask_tokens, parse_lexicon
from .minimize import (
    DEFAULT_KEPT_TAGS,
    DEFAULT_REMOVED_TAGS,
    KeepOnly,
    MinimizationStrategy,
    RandomRemoval,
    SensitiveMasking,
    Unaltered,
    WordTypeRemoval,
    count_words,
    minimize,
    minimize_tokens,
    removal_fraction,
    stable_seed,
)
from .tagging import ExternalTagger, PosTag, RuleTagger, Tagger, coarse_tag, default_tagger, pos_tag
from .terms import CachedStemmer, default_stemmer, load_stopwords, preprocess_terms, terms_from_tokens
from .tokenize import Token, is_numeral, is_punct, tokenize

__all__ = [
    "Category", "SensitiveLexicon", "default_lexicon", "load_lexicon", "mask_sensitive", "mask_tokens",
    "parse_lexicon", "DEFAULT_KEPT_TAGS", "DEFAULT_REMOVED_TAGS", "KeepOnly", "MinimizationStrategy",
    "RandomRemoval", "SensitiveMasking", "Unaltered", "WordTypeRemoval", "count_words", "minimize",
    "minimize_tokens", "removal_fraction", "stable_seed", "ExternalTagger", "PosTag", "RuleTagger", "Tagger",
    "coarse_tag", "default_tagger", "pos_tag", "CachedStemmer", "default_stemmer", "load_stopwords",
    "preprocess_terms", "terms_from_tokens", "Token", "is_numeral", "is_punct", "tokenize",
]
