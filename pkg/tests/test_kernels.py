import random

import numpy as np
import pytest

from capmetrics import kernels
from capmetrics import _pykernels
from capmetrics.cider import CiderParams, build_idf, pack_caption, pack_references
from corpora import random_corpus


def test_python_backend_always_available():
    assert "python" in kernels.available_backends()


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


def test_use_backend_returns_previous():
    start = kernels.backend
    prev = kernels.use_backend("python")
    assert prev == start
    assert kernels.reference_similarity is _pykernels.reference_similarity
    kernels.use_backend(start)


def test_empty_reference_pack_rejected():
    empty = np.zeros(0, dtype=np.int64)
    with pytest.raises(ValueError):
        _pykernels.reference_similarity(
            empty, np.zeros(0), np.zeros(2, dtype=np.int64), np.zeros(1), 0,
            empty, np.zeros(0), np.zeros(1, dtype=np.int64), np.zeros(0), empty, 6.0, True, True)


@pytest.mark.skipif("cython" not in kernels.available_backends(), reason="extension not built")
def test_backends_agree_on_random_corpora():
    from capmetrics import _ckernels
    rng = random.Random(3)
    params = CiderParams()
    for _ in range(200):
        items = random_corpus(rng, annotate=False)
        idf = build_idf([it.references for it in items])
        for it in items:
            refs = pack_references(it.references, idf, params.n_max)
            for cand in it.candidates:
                c = pack_caption(cand, idf, params.n_max)
                args = (c.ids, c.weights, c.offsets, c.norms, c.length,
                        refs.ids, refs.weights, refs.offsets, refs.norms, refs.lengths, params.sigma)
                for clip, pen in ((True, True), (False, False), (True, False)):
                    a = _ckernels.reference_similarity(*args, clip, pen)
                    b = _pykernels.reference_similarity(*args, clip, pen)
                    assert a == pytest.approx(b, abs=1e-12)
