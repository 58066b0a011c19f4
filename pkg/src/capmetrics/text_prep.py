"""Caption normalisation and n-gram counting shared by every metric."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .porter import porter_stem

DEFAULT_NGRAM_MAX = 4

# Applied after lowercasing. Apostrophes are dropped ("it's" -> "its"); every
# other character outside [a-z0-9] becomes a separator ("tin-roof" -> "tin roof").
_APOSTROPHE_RE = re.compile(r"['\u2019]")
_PUNCT_RE = re.compile(r"[^a-z0-9\s]")


@dataclass(frozen=True)
class Caption:
    """A normalised caption.

    ``tuples`` optionally carries pre-extracted semantic tuples; when it is
    ``None`` the SPICE extractor derives them from ``tokens``.
    """

    raw_text: str
    tokens: tuple[str, ...]
    likelihood: Optional[float] = None
    tuples: Optional[frozenset] = field(default=None, compare=False)

    def __post_init__(self):
        if self.likelihood is not None and not 0.0 <= self.likelihood <= 1.0:
            raise ValueError(f"likelihood must lie in [0, 1], got {self.likelihood}")

    @property
    def length(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class NGramProfile:
    """Per-order n-gram counts. ``counts[n - 1]`` holds the order-``n`` multiset."""

    counts: tuple[Counter, ...]

    @property
    def max_order(self) -> int:
        return len(self.counts)

    def order(self, n: int) -> Counter:
        return self.counts[n - 1]

    def total(self, n: int) -> int:
        return sum(self.counts[n - 1].values())


def normalize_tokens(raw_text: str) -> tuple[str, ...]:
    text = _APOSTROPHE_RE.sub("", raw_text.lower())
    return tuple(_PUNCT_RE.sub(" ", text).split())


def normalize(raw_text: str, likelihood: Optional[float] = None, tuples=None) -> Caption:
    """Lowercase, strip punctuation and split on whitespace."""
    return Caption(raw_text, normalize_tokens(raw_text), likelihood, tuples)


def stem(token: str) -> str:
    return porter_stem(token)


def ngram_counts(tokens: Iterable[str], n_max: int = DEFAULT_NGRAM_MAX) -> NGramProfile:
    if n_max < 1:
        raise ValueError("n-gram order must be >= 1")
    tokens = tuple(tokens)
    counts = []
    for n in range(1, n_max + 1):
        counts.append(Counter(tokens[i:i + n] for i in range(len(tokens) - n + 1)))
    return NGramProfile(tuple(counts))


def ngram_profile(caption: Caption, n_max: int = DEFAULT_NGRAM_MAX, stemmed: bool = False) -> NGramProfile:
    tokens = caption.tokens
    if stemmed:
        tokens = tuple(stem(t) for t in tokens)
    return ngram_counts(tokens, n_max)
