"""Caption evaluation: CIDEr, CIDEr-D, tuple SPICE, M-SPICE, SPIDEr and SPIDEr-max."""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    ScoredItem,
    agreement_accuracy,
    beam_curve,
    best_beam_histogram,
    likelihood_score_correlation,
    score_corpus,
    tfidf_delta_correlation,
)
from .cider import (  # noqa: E402
    CiderParams,
    IdfTable,
    build_idf,
    cider,
    cider_d,
    corpus_cider,
    corpus_cider_d,
    penalty,
    tfidf_vector,
)
from .dataset import load_dataset  # noqa: E402
from .errors import CapMetricsError, ValidationError  # noqa: E402
from .report import EvalConfig, emit_report, run_evaluation  # noqa: E402
from .spice import SemanticTuple, extract_tuples, load_lexicon, m_spice, spice, spice_fscore  # noqa: E402
from .spider import EvalItem, SpiderScore, corpus_spider_max, spider, spider_max  # noqa: E402
from .text_prep import Caption, NGramProfile, ngram_profile, normalize, stem  # noqa: E402

__all__ = [
    "Caption", "CapMetricsError", "CiderParams", "EvalConfig", "EvalItem", "IdfTable",
    "NGramProfile", "ScoredItem", "SemanticTuple", "SpiderScore", "ValidationError",
    "agreement_accuracy", "beam_curve", "best_beam_histogram", "build_idf", "cider",
    "cider_d", "corpus_cider", "corpus_cider_d", "corpus_spider_max", "emit_report",
    "extract_tuples", "likelihood_score_correlation", "load_dataset", "load_lexicon",
    "m_spice", "ngram_profile", "normalize", "penalty", "run_evaluation", "score_corpus",
    "spice", "spice_fscore", "spider", "spider_max", "stem", "tfidf_delta_correlation",
    "tfidf_vector",
]
