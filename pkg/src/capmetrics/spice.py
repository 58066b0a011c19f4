"""Tuple-based SPICE and multi-candidate M-SPICE.

Captions are reduced to sets of semantic tuples: objects ``(noun,)``,
attributes ``(noun, adjective)`` and relations ``(noun, verb, noun)``. The
score is the F1 between the candidate set and the union of the reference
sets. Matching is exact string equality; there is no synonym handling.

Tuples may come pre-extracted on a :class:`~capmetrics.text_prep.Caption`.
Otherwise a small rule-based extractor tags words through a lexicon:

* every noun yields an object;
* an adjective directly followed by a noun yields an attribute;
* after dropping unknown words and adjectives, each consecutive
  noun, verb, noun run yields a relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import LexiconError, NoCandidates
from .text_prep import Caption

OBJECT, ATTRIBUTE, RELATION = "object", "attribute", "relation"
_KIND_BY_ARITY = {1: OBJECT, 2: ATTRIBUTE, 3: RELATION}
WORD_CLASSES = ("noun", "verb", "adj")


@dataclass(frozen=True, order=True)
class SemanticTuple:
    kind: str
    words: tuple[str, ...]

    def __post_init__(self):
        if _KIND_BY_ARITY.get(len(self.words)) != self.kind:
            raise ValueError(f"{self.kind} tuple cannot have {len(self.words)} word(s)")

    @classmethod
    def of(cls, *words: str) -> "SemanticTuple":
        if len(words) not in _KIND_BY_ARITY:
            raise ValueError(f"tuples have 1 to 3 words, got {len(words)}")
        return cls(_KIND_BY_ARITY[len(words)], tuple(words))


TupleSet = frozenset  # frozenset[SemanticTuple]


def tuple_set(items: Iterable) -> frozenset:
    """Build a binarised tuple set from SemanticTuples or plain word sequences."""
    out = set()
    for item in items:
        if isinstance(item, SemanticTuple):
            out.add(item)
        else:
            out.add(SemanticTuple.of(*item))
    return frozenset(out)


class Lexicon(Mapping):
    """Read-only word -> class mapping (classes: noun, verb, adj)."""

    def __init__(self, entries: Mapping[str, str]):
        for word, cls in entries.items():
            if cls not in WORD_CLASSES:
                raise LexiconError(f"unknown word class {cls!r} for {word!r}")
        self._entries = dict(entries)

    def __getitem__(self, word):
        return self._entries[word]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


def parse_lexicon(lines: Iterable[str], source: str = "<lexicon>") -> Lexicon:
    entries = {}
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"{source}:{line_no}: expected 'word<TAB>class'")
        word, cls = parts[0].strip(), parts[1].strip()
        if cls not in WORD_CLASSES:
            raise LexiconError(f"{source}:{line_no}: unknown class {cls!r} (expected noun, verb or adj)")
        if not word or word != word.lower() or not word.isalnum():
            raise LexiconError(f"{source}:{line_no}: word {word!r} is not a normalised token")
        if entries.get(word, cls) != cls:
            raise LexiconError(f"{source}:{line_no}: {word!r} already listed as {entries[word]}")
        entries[word] = cls
    return Lexicon(entries)


def load_lexicon(path) -> Lexicon:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_lexicon(fh, str(path))


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    text = resources.files("capmetrics").joinpath("data/lexicon.tsv").read_text(encoding="utf-8")
    return parse_lexicon(text.splitlines(), "lexicon.tsv")


def extract_tuples(caption: Caption, lexicon: Optional[Lexicon] = None) -> frozenset:
    if lexicon is None:
        lexicon = default_lexicon()
    return _extract(caption.tokens, lexicon)


@lru_cache(maxsize=65536)
def _extract(tokens: tuple, lexicon: Lexicon) -> frozenset:
    found = set()
    tags = [lexicon.get(t) for t in tokens]
    for i, (tok, tag) in enumerate(zip(tokens, tags)):
        if tag == "noun":
            found.add(SemanticTuple(OBJECT, (tok,)))
            if i > 0 and tags[i - 1] == "adj":
                found.add(SemanticTuple(ATTRIBUTE, (tok, tokens[i - 1])))
    skeleton = [(t, tag) for t, tag in zip(tokens, tags) if tag in ("noun", "verb")]
    for (a, ta), (v, tv), (b, tb) in zip(skeleton, skeleton[1:], skeleton[2:]):
        if (ta, tv, tb) == ("noun", "verb", "noun"):
            found.add(SemanticTuple(RELATION, (a, v, b)))
    return frozenset(found)


def caption_tuples(caption: Caption, lexicon: Optional[Lexicon] = None) -> frozenset:
    """Annotated tuples when present, extracted ones otherwise."""
    if caption.tuples is not None:
        return caption.tuples
    return extract_tuples(caption, lexicon)


def merge_tuples(sets: Iterable[frozenset]) -> frozenset:
    return frozenset().union(*sets)


def precision_recall(candidate_tuples: frozenset, reference_tuples: frozenset) -> tuple[float, float]:
    if not candidate_tuples or not reference_tuples:
        return 0.0, 0.0
    hits = len(candidate_tuples & reference_tuples)
    return hits / len(candidate_tuples), hits / len(reference_tuples)


def spice_fscore(candidate_tuples: frozenset, reference_tuples: frozenset) -> float:
    """F1 of the two tuple sets; 0 if either is empty or they are disjoint."""
    p, r = precision_recall(candidate_tuples, reference_tuples)
    if p + r == 0.0:
        return 0.0
    return 2.0 * p * r / (p + r)


def m_spice(candidates: Sequence[frozenset], reference_tuples: frozenset) -> float:
    if len(candidates) == 0:
        raise NoCandidates("M-SPICE needs at least one candidate")
    return spice_fscore(merge_tuples(candidates), reference_tuples)


def spice(candidate: Caption, references: Sequence[Caption], lexicon: Optional[Lexicon] = None) -> float:
    refs = merge_tuples(caption_tuples(r, lexicon) for r in references)
    return spice_fscore(caption_tuples(candidate, lexicon), refs)
