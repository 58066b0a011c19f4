"""Backend selection for the similarity kernel.

The compiled extension is used when importable; otherwise the pure-Python
version. ``use_backend`` switches explicitly (tests and benchmarks).
"""

import logging

from . import _pykernels

logger = logging.getLogger(__name__)

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

backend = "cython" if _ckernels is not None else "python"
reference_similarity = BACKENDS[backend].reference_similarity


def use_backend(name):
    """Select ``"cython"`` or ``"python"``; returns the previous backend name."""
    global backend, reference_similarity
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    previous = backend
    backend = name
    reference_similarity = BACKENDS[name].reference_similarity
    logger.debug("similarity backend: %s", name)
    return previous


def available_backends():
    return sorted(BACKENDS)
