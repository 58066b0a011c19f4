"""Random small corpora for property and oracle tests."""

import random

from capmetrics.spice import SemanticTuple
from capmetrics.spider import EvalItem
from capmetrics.text_prep import Caption

VOCAB = ["a", "dog", "barks", "man", "speaks", "rain", "falls", "loud", "car", "the", "goat", "tin"]
TUPLE_POOL = [
    SemanticTuple.of("dog"), SemanticTuple.of("man"), SemanticTuple.of("rain"),
    SemanticTuple.of("car"), SemanticTuple.of("dog", "loud"), SemanticTuple.of("rain", "heavy"),
    SemanticTuple.of("man", "speaks", "dog"), SemanticTuple.of("car", "passes", "man"),
]


def _tokens(rng, max_len, min_len=0):
    return tuple(rng.choice(VOCAB) for _ in range(rng.randint(min_len, max_len)))


def _tuples(rng):
    return frozenset(rng.sample(TUPLE_POOL, rng.randint(0, 4)))


def random_corpus(rng: random.Random, max_items=5, max_len=8, n_cands=None, max_refs=4,
                  annotate=True, likelihoods=True, copy_prob=0.0):
    """Items with 1..max_items entries; tuples annotated (random) or left to the extractor.

    With probability ``copy_prob`` a candidate is replaced by one of its item's references.
    """
    n_items = rng.randint(1, max_items)
    if n_cands is None:
        n_cands = rng.randint(1, 5)
    items = []
    for i in range(n_items):
        cands = []
        for _ in range(n_cands):
            toks = _tokens(rng, max_len)
            cands.append(Caption(" ".join(toks), toks,
                                 round(rng.random(), 3) if likelihoods else None,
                                 _tuples(rng) if annotate else None))
        refs = []
        for _ in range(rng.randint(1, max_refs)):
            toks = _tokens(rng, max_len, 1)
            refs.append(Caption(" ".join(toks), toks, None, _tuples(rng) if annotate else None))
        for j, c in enumerate(cands):
            if rng.random() < copy_prob:
                ref = rng.choice(refs)
                cands[j] = Caption(ref.raw_text, ref.tokens, c.likelihood, ref.tuples)
        items.append(EvalItem(f"item{i}", tuple(cands), tuple(refs)))
    return items


def oracle_view(items, tuple_fn):
    """Convert items to the plain (tokens, sets) layout the oracle expects."""
    out = []
    for it in items:
        out.append((
            [list(c.tokens) for c in it.candidates],
            [list(r.tokens) for r in it.references],
            [set(tuple_fn(c)) for c in it.candidates],
            [set(tuple_fn(r)) for r in it.references],
        ))
    return out
