"""Compare the compiled and pure-Python similarity kernels.

    python benchmarks/bench_kernels.py --items 1000 --candidates 10

Reports kernel-only time (inputs pre-packed) and end-to-end SPIDEr-max time
for each available backend, and checks that both give the same scores.
"""

import argparse
import random
import time

from capmetrics import kernels
from capmetrics.cider import CiderParams, build_idf, pack_caption, pack_references, score_packed
from capmetrics.spider import EvalItem, corpus_spider_max
from capmetrics.text_prep import Caption


def synthetic_corpus(n_items, n_cands, n_refs, vocab_size, seed):
    rng = random.Random(seed)
    vocab = [f"w{i}" for i in range(vocab_size)]
    weights = [1.0 / (i + 1) for i in range(vocab_size)]  # Zipf-like

    def caption():
        toks = tuple(rng.choices(vocab, weights, k=rng.randint(8, 20)))
        return Caption(" ".join(toks), toks, round(rng.random(), 3), frozenset())

    return [EvalItem(f"item{i}", tuple(caption() for _ in range(n_cands)),
                     tuple(caption() for _ in range(n_refs))) for i in range(n_items)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--items", type=int, default=1000)
    ap.add_argument("--candidates", type=int, default=10)
    ap.add_argument("--references", type=int, default=5)
    ap.add_argument("--vocab", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    items = synthetic_corpus(args.items, args.candidates, args.references, args.vocab, args.seed)
    params = CiderParams()
    idf = build_idf([it.references for it in items], params.n_max)
    packed = [(pack_references(it.references, idf, params.n_max),
               [pack_caption(c, idf, params.n_max) for c in it.candidates]) for it in items]
    n_pairs = args.items * args.candidates

    print(f"{args.items} items x {args.candidates} candidates x {args.references} references")
    print(f"{'backend':<8} {'kernel s':>10} {'us/cand':>10} {'end-to-end s':>14}")
    results = {}
    previous = kernels.backend
    for name in kernels.available_backends():
        kernels.use_backend(name)
        start = time.perf_counter()
        scores = [score_packed(c, refs, params, clip=True, use_penalty=True) for refs, cands in packed for c in cands]
        kernel_s = time.perf_counter() - start
        start = time.perf_counter()
        corpus_spider_max(items, params, top_k=args.candidates)
        e2e_s = time.perf_counter() - start
        results[name] = (scores, kernel_s)
        print(f"{name:<8} {kernel_s:>10.3f} {1e6 * kernel_s / n_pairs:>10.1f} {e2e_s:>14.3f}")
    kernels.use_backend(previous)

    if len(results) == 2:
        (a, ta), (b, tb) = results["cython"], results["python"]
        diff = max(abs(x - y) for x, y in zip(a, b))
        print(f"kernel speed-up: {tb / ta:.1f}x, max |score diff| = {diff:.2e}")


if __name__ == "__main__":
    main()
