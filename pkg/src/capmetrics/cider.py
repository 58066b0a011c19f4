"""CIDEr and CIDEr-D consensus scores.

Both metrics weight n-grams by TF-IDF, where the document frequency of an
n-gram is the number of corpus items whose reference set contains it. The
score of one candidate therefore depends on the references of every other
item, so an :class:`IdfTable` is always built over the whole corpus first.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import EmptyCorpus, NoReferences
from .text_prep import DEFAULT_NGRAM_MAX, Caption, NGramProfile, ngram_profile


@dataclass(frozen=True)
class CiderParams:
    n_max: int = DEFAULT_NGRAM_MAX
    sigma: float = 6.0
    scale: float = 10.0

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if not self.scale > 0:
            raise ValueError("scale must be > 0")


class IdfTable:
    """Corpus document frequencies for n-grams of orders ``1..n_max``.

    N-grams are also given dense integer ids (sorted within the table) so
    that TF-IDF vectors can be packed into arrays for the similarity kernel.
    """

    def __init__(self, doc_freq: Sequence[Counter], num_items: int, stemmed: bool = False):
        if num_items < 1:
            raise EmptyCorpus("IDF table needs at least one item")
        self.doc_freq = tuple(doc_freq)
        self.num_items = num_items
        self.stemmed = stemmed
        log_n = math.log(num_items)
        self._idf = {}
        self._ids = {}
        for counts in self.doc_freq:
            for ngram, df in counts.items():
                if not 1 <= df <= num_items:
                    raise ValueError(f"document frequency {df} out of range for {ngram!r}")
                self._idf[ngram] = log_n - math.log(df)
        for i, ngram in enumerate(sorted(self._idf)):
            self._ids[ngram] = i

    @property
    def n_max(self) -> int:
        return len(self.doc_freq)

    def df(self, ngram: tuple) -> int:
        """Document frequency; n-grams absent from every reference count as ``num_items``."""
        if len(ngram) > self.n_max:
            return self.num_items
        return self.doc_freq[len(ngram) - 1].get(ngram, self.num_items)

    def idf(self, ngram: tuple) -> float:
        return self._idf.get(ngram, 0.0)

    def ngram_id(self, ngram: tuple) -> int:
        return self._ids[ngram]


def build_idf(corpus_references: Sequence[Sequence[Caption]], n_max: int = DEFAULT_NGRAM_MAX,
              stemmed: bool = False) -> IdfTable:
    """Count, per n-gram, the items whose references contain it at least once."""
    if len(corpus_references) == 0:
        raise EmptyCorpus("cannot build IDF over an empty corpus")
    doc_freq = [Counter() for _ in range(n_max)]
    for refs in corpus_references:
        if len(refs) == 0:
            raise NoReferences("every corpus item needs at least one reference")
        seen = [set() for _ in range(n_max)]
        for ref in refs:
            profile = ngram_profile(ref, n_max, stemmed)
            for n in range(n_max):
                seen[n].update(profile.counts[n])
        for n in range(n_max):
            doc_freq[n].update(seen[n])
    return IdfTable(doc_freq, len(corpus_references), stemmed)


@dataclass(frozen=True)
class TfIdfVector:
    """Per-order sparse weights; absent keys weigh 0."""

    weights: tuple[dict, ...]

    def norms(self) -> list[float]:
        return [math.sqrt(math.fsum(w * w for w in order.values())) for order in self.weights]

    def mass(self) -> float:
        """Sum of all weights across orders."""
        return math.fsum(w for order in self.weights for w in order.values())


def tfidf_vector(profile: NGramProfile, idf: IdfTable) -> TfIdfVector:
    if profile.max_order > idf.n_max:
        raise ValueError(f"profile has order {profile.max_order} but IDF table stops at {idf.n_max}")
    weights = []
    for counts in profile.counts:
        total = sum(counts.values())
        weights.append({g: (c / total) * idf.idf(g) for g, c in counts.items()})
    return TfIdfVector(tuple(weights))


def penalty(cand_len: int, ref_len: int, sigma: float) -> float:
    """Gaussian length penalty ``exp(-(c - r)^2 / (2 sigma^2))``."""
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    delta = float(cand_len - ref_len)
    return math.exp(-(delta * delta) / (2.0 * sigma * sigma))


@dataclass(frozen=True)
class PackedVector:
    """A TF-IDF vector flattened for the kernel: zero weights are dropped."""

    ids: np.ndarray
    weights: np.ndarray
    offsets: np.ndarray
    norms: np.ndarray
    length: int

    @classmethod
    def from_vector(cls, vec: TfIdfVector, idf: IdfTable, length: int) -> "PackedVector":
        ids, weights, offsets = [], [], [0]
        for order in vec.weights:
            entries = sorted((idf.ngram_id(g), w) for g, w in order.items() if w > 0.0)
            ids.extend(i for i, _ in entries)
            weights.extend(w for _, w in entries)
            offsets.append(len(ids))
        return cls(
            np.asarray(ids, dtype=np.int64),
            np.asarray(weights, dtype=np.float64),
            np.asarray(offsets, dtype=np.int64),
            np.asarray(vec.norms(), dtype=np.float64),
            length,
        )


@dataclass(frozen=True)
class PackedReferences:
    """All references of one item concatenated; segment ``j * n_max + n`` is ref ``j``, order ``n + 1``."""

    ids: np.ndarray
    weights: np.ndarray
    offsets: np.ndarray
    norms: np.ndarray
    lengths: np.ndarray

    @classmethod
    def from_packed(cls, refs: Sequence[PackedVector]) -> "PackedReferences":
        offsets = [0]
        for ref in refs:
            base = offsets[-1]
            offsets.extend((ref.offsets[1:] + base).tolist())
        return cls(
            np.concatenate([r.ids for r in refs]),
            np.concatenate([r.weights for r in refs]),
            np.asarray(offsets, dtype=np.int64),
            np.concatenate([r.norms for r in refs]),
            np.asarray([r.length for r in refs], dtype=np.int64),
        )


def pack_caption(caption: Caption, idf: IdfTable, n_max: int) -> PackedVector:
    vec = tfidf_vector(ngram_profile(caption, n_max, idf.stemmed), idf)
    return PackedVector.from_vector(vec, idf, caption.length)


def pack_references(references: Sequence[Caption], idf: IdfTable, n_max: int) -> PackedReferences:
    if len(references) == 0:
        raise NoReferences("at least one reference is required")
    return PackedReferences.from_packed([pack_caption(r, idf, n_max) for r in references])


def score_packed(cand: PackedVector, refs: PackedReferences, params: CiderParams, *,
                 clip: bool, use_penalty: bool) -> float:
    sim = kernels.reference_similarity(
        cand.ids, cand.weights, cand.offsets, cand.norms, cand.length,
        refs.ids, refs.weights, refs.offsets, refs.norms, refs.lengths,
        params.sigma, clip, use_penalty,
    )
    return params.scale * sim


def _check_table(idf: IdfTable, params: CiderParams, stemmed: bool, metric: str):
    if idf.stemmed != stemmed:
        kind = "stemmed" if stemmed else "unstemmed"
        raise ValueError(f"{metric} needs an IDF table built from {kind} references")
    if params.n_max > idf.n_max:
        raise ValueError(f"params.n_max={params.n_max} exceeds IDF table order {idf.n_max}")


def cider_d(candidate: Caption, references: Sequence[Caption], idf: IdfTable,
            params: CiderParams = CiderParams()) -> float:
    """CIDEr-D of one candidate: clipped cosine times length penalty, in ``[0, scale]``."""
    _check_table(idf, params, False, "CIDEr-D")
    refs = pack_references(references, idf, params.n_max)
    cand = pack_caption(candidate, idf, params.n_max)
    return score_packed(cand, refs, params, clip=True, use_penalty=True)


def cider(candidate: Caption, references: Sequence[Caption], idf: IdfTable,
          params: CiderParams = CiderParams()) -> float:
    """Plain CIDEr: stemmed n-grams, no clipping, no length penalty."""
    _check_table(idf, params, True, "CIDEr")
    refs = pack_references(references, idf, params.n_max)
    cand = pack_caption(candidate, idf, params.n_max)
    return score_packed(cand, refs, params, clip=False, use_penalty=False)


def _corpus(items, params, stemmed, clip, use_penalty):
    if len(items) == 0:
        raise EmptyCorpus("corpus has no items")
    idf = build_idf([refs for _, refs in items], params.n_max, stemmed)
    scores = []
    for cand, refs in items:
        packed_refs = pack_references(refs, idf, params.n_max)
        packed = pack_caption(cand, idf, params.n_max)
        scores.append(score_packed(packed, packed_refs, params, clip=clip, use_penalty=use_penalty))
    return scores, math.fsum(scores) / len(scores)


def corpus_cider_d(items: Sequence[tuple[Caption, Sequence[Caption]]],
                   params: CiderParams = CiderParams()) -> tuple[list[float], float]:
    """Score each (candidate, references) pair against a corpus-wide IDF; return scores and their mean."""
    return _corpus(items, params, False, True, True)


def corpus_cider(items: Sequence[tuple[Caption, Sequence[Caption]]],
                 params: CiderParams = CiderParams()) -> tuple[list[float], float]:
    return _corpus(items, params, True, False, False)
