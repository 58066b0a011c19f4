"""SPIDEr and SPIDEr-max.

SPIDEr is the mean of CIDEr-D and SPICE for one candidate. SPIDEr-max takes
the best SPIDEr over the first ``top_k`` candidates of an item, so a system
that proposes several captions is credited for its best one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cider import (
    CiderParams,
    IdfTable,
    PackedReferences,
    build_idf,
    pack_caption,
    pack_references,
    score_packed,
)
from .errors import BadTopK, EmptyCorpus, NoCandidates, NoReferences, RaggedCandidates
from .spice import Lexicon, caption_tuples, merge_tuples, spice_fscore
from .text_prep import Caption

DEFAULT_TOP_K = 5
SPIDER_MAX_VALUE = 5.5


@dataclass(frozen=True)
class EvalItem:
    """Candidates (in beam / generation order) and references for one audio clip."""

    item_id: str
    candidates: tuple[Caption, ...]
    references: tuple[Caption, ...]

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "references", tuple(self.references))
        if not self.candidates:
            raise NoCandidates(f"item {self.item_id!r} has no candidates")
        if not self.references:
            raise NoReferences(f"item {self.item_id!r} has no references")


@dataclass(frozen=True)
class SpiderScore:
    cider_d: float
    spice: float
    spider: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "spider", (self.cider_d + self.spice) / 2.0)


class ItemScorer:
    """Scores candidates of one item, reusing packed references and merged reference tuples."""

    def __init__(self, references: Sequence[Caption], idf: IdfTable, params: CiderParams,
                 lexicon: Optional[Lexicon] = None):
        if idf.stemmed:
            raise ValueError("SPIDEr uses CIDEr-D, which needs an unstemmed IDF table")
        self.idf = idf
        self.params = params
        self.lexicon = lexicon
        self.packed_refs: PackedReferences = pack_references(references, idf, params.n_max)
        self.reference_tuples = merge_tuples(caption_tuples(r, lexicon) for r in references)

    def cider_d(self, candidate: Caption) -> float:
        packed = pack_caption(candidate, self.idf, self.params.n_max)
        return score_packed(packed, self.packed_refs, self.params, clip=True, use_penalty=True)

    def score(self, candidate: Caption) -> SpiderScore:
        spice = spice_fscore(caption_tuples(candidate, self.lexicon), self.reference_tuples)
        return SpiderScore(self.cider_d(candidate), spice)


def spider(candidate: Caption, references: Sequence[Caption], idf: IdfTable,
           params: CiderParams = CiderParams(), lexicon: Optional[Lexicon] = None) -> SpiderScore:
    return ItemScorer(references, idf, params, lexicon).score(candidate)


def argmax(values: Sequence[float]) -> int:
    """Index of the largest value; the smallest index wins ties."""
    best = 0
    for i in range(1, len(values)):
        if values[i] > values[best]:
            best = i
    return best


def _check_top_k(item: EvalItem, top_k: int):
    if not 1 <= top_k <= len(item.candidates):
        raise BadTopK(f"top_k={top_k} outside [1, {len(item.candidates)}] for item {item.item_id!r}")


def candidate_scores(item: EvalItem, idf: IdfTable, params: CiderParams = CiderParams(),
                     lexicon: Optional[Lexicon] = None, limit: Optional[int] = None) -> list[SpiderScore]:
    """SPIDEr of each of the first ``limit`` candidates (all when ``None``)."""
    scorer = ItemScorer(item.references, idf, params, lexicon)
    cands = item.candidates if limit is None else item.candidates[:limit]
    return [scorer.score(c) for c in cands]


def spider_max(item: EvalItem, idf: IdfTable, params: CiderParams = CiderParams(),
               top_k: int = DEFAULT_TOP_K, lexicon: Optional[Lexicon] = None) -> tuple[float, int]:
    """Best SPIDEr among the first ``top_k`` candidates and the index reaching it."""
    _check_top_k(item, top_k)
    values = [s.spider for s in candidate_scores(item, idf, params, lexicon, top_k)]
    best = argmax(values)
    return values[best], best


@dataclass
class CorpusSpiderMax:
    per_item: list[tuple[float, int]]
    mean: float
    per_k_curve: dict[int, float]


def corpus_idf(items: Sequence[EvalItem], params: CiderParams, stemmed: bool = False) -> IdfTable:
    if len(items) == 0:
        raise EmptyCorpus("corpus has no items")
    return build_idf([it.references for it in items], params.n_max, stemmed)


def corpus_spider_max(items: Sequence[EvalItem], params: CiderParams = CiderParams(),
                      top_k: int = DEFAULT_TOP_K, lexicon: Optional[Lexicon] = None) -> CorpusSpiderMax:
    """Per-item SPIDEr-max, its corpus mean, and the mean for every k in ``1..top_k``."""
    if len(items) == 0:
        raise EmptyCorpus("corpus has no items")
    if top_k < 1:
        raise BadTopK(f"top_k must be >= 1, got {top_k}")
    for it in items:
        if len(it.candidates) < top_k:
            raise RaggedCandidates(it.item_id, len(it.candidates), top_k)
    idf = corpus_idf(items, params)
    running = []  # per item: prefix maxima of SPIDEr over k = 1..top_k
    per_item = []
    for it in items:
        values = [s.spider for s in candidate_scores(it, idf, params, lexicon, top_k)]
        prefix, best = [], 0
        for i, v in enumerate(values):
            if v > values[best]:
                best = i
            prefix.append(values[best])
        running.append(prefix)
        per_item.append((values[best], best))
    n = len(items)
    curve = {k: math.fsum(p[k - 1] for p in running) / n for k in range(1, top_k + 1)}
    return CorpusSpiderMax(per_item, math.fsum(s for s, _ in per_item) / n, curve)
