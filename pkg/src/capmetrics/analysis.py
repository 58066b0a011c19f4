"""Diagnostics over scored candidate lists.

These compare the model's own choice (highest likelihood) with the choice
SPIDEr would make, count which beam positions hold the best candidate, and
relate TF-IDF mass to the SPIDEr gain of the better choice.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .cider import CiderParams, tfidf_vector
from .errors import DegenerateVariance, EmptyCorpus, MissingLikelihood, RaggedCandidates
from .spice import Lexicon
from .spider import EvalItem, SpiderScore, argmax, candidate_scores, corpus_idf
from .text_prep import ngram_profile


@dataclass(frozen=True)
class ScoredItem:
    item_id: str
    likelihoods: tuple[Optional[float], ...]
    scores: tuple[SpiderScore, ...]
    tfidf_mass: tuple[float, ...]

    def __post_init__(self):
        n = len(self.scores)
        if n == 0 or len(self.likelihoods) != n or len(self.tfidf_mass) != n:
            raise ValueError(f"item {self.item_id!r}: per-candidate arrays must share a length >= 1")

    @property
    def spider(self) -> list[float]:
        return [s.spider for s in self.scores]

    def best_by_spider(self) -> int:
        return argmax(self.spider)

    def best_by_likelihood(self) -> int:
        for i, p in enumerate(self.likelihoods):
            if p is None:
                raise MissingLikelihood(self.item_id, i)
        return argmax(self.likelihoods)


def score_corpus(items: Sequence[EvalItem], params: CiderParams = CiderParams(),
                 lexicon: Optional[Lexicon] = None) -> list[ScoredItem]:
    """Score every candidate of every item (SPIDEr components and TF-IDF mass)."""
    idf = corpus_idf(items, params)
    out = []
    for it in items:
        scores = candidate_scores(it, idf, params, lexicon)
        mass = [tfidf_vector(ngram_profile(c, params.n_max), idf).mass() for c in it.candidates]
        out.append(ScoredItem(
            it.item_id,
            tuple(c.likelihood for c in it.candidates),
            tuple(scores),
            tuple(mass),
        ))
    return out


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise ValueError("pearson needs paired samples")
    if len(xs) < 2:
        raise DegenerateVariance("correlation needs at least two pairs")
    mx = math.fsum(xs) / len(xs)
    my = math.fsum(ys) / len(ys)
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVariance("one of the variables has zero variance")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _require(items):
    if len(items) == 0:
        raise EmptyCorpus("no scored items")


def agreement_accuracy(items: Sequence[ScoredItem]) -> float:
    """Fraction of items where the most likely candidate is also the SPIDEr-best one."""
    _require(items)
    hits = sum(it.best_by_likelihood() == it.best_by_spider() for it in items)
    return hits / len(items)


def likelihood_score_correlation(items: Sequence[ScoredItem]) -> float:
    """Pearson correlation of likelihood vs SPIDEr, pooled over all candidates of all items."""
    _require(items)
    xs, ys = [], []
    for it in items:
        for i, (p, s) in enumerate(zip(it.likelihoods, it.spider)):
            if p is None:
                raise MissingLikelihood(it.item_id, i)
            xs.append(p)
            ys.append(s)
    return pearson(xs, ys)


def best_beam_histogram(items: Sequence[ScoredItem]) -> dict[int, int]:
    """How often each beam index holds the SPIDEr-best candidate (observed indices only)."""
    return dict(sorted(Counter(it.best_by_spider() for it in items).items()))


def tfidf_deltas(items: Sequence[ScoredItem]) -> tuple[list[float], list[float]]:
    """Per item: (TF-IDF mass, SPIDEr) of the SPIDEr-best minus the most likely candidate."""
    d_mass, d_spider = [], []
    for it in items:
        best, chosen = it.best_by_spider(), it.best_by_likelihood()
        d_mass.append(it.tfidf_mass[best] - it.tfidf_mass[chosen])
        d_spider.append(it.scores[best].spider - it.scores[chosen].spider)
    return d_mass, d_spider


def tfidf_delta_correlation(items: Sequence[ScoredItem]) -> float:
    _require(items)
    return pearson(*tfidf_deltas(items))


def beam_curve(items: Sequence[ScoredItem], top_k: Optional[int] = None) -> dict[int, float]:
    """Corpus mean of the best SPIDEr among the first k candidates, for k = 1..top_k.

    ``top_k`` defaults to the shortest candidate list in the corpus.
    """
    _require(items)
    shortest = min(len(it.scores) for it in items)
    if top_k is None:
        top_k = shortest
    for it in items:
        if len(it.scores) < top_k:
            raise RaggedCandidates(it.item_id, len(it.scores), top_k)
    curve = {}
    for k in range(1, top_k + 1):
        curve[k] = math.fsum(max(it.spider[:k]) for it in items) / len(items)
    return curve
