"""Command line: ``capmetrics score`` and ``capmetrics analyze``.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import analysis
from .cider import CiderParams
from .dataset import load_dataset
from .errors import ValidationError
from .report import (
    FORMATS,
    METRICS,
    SELECTIONS,
    EvalConfig,
    emit_report,
    load_scores,
    render_table,
    run_evaluation,
    write_text,
)
from .spice import load_lexicon
from .spider import DEFAULT_TOP_K

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2
REPORTS = ("agreement", "correlation", "beam-hist", "tfidf-delta", "beam-curve")

logger = logging.getLogger("capmetrics")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # bad flags count as validation errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _metric_list(text):
    metrics = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in metrics if m not in METRICS]
    if not metrics or bad:
        raise argparse.ArgumentTypeError(f"choose a comma-separated subset of {','.join(METRICS)}")
    return tuple(metrics)


def build_parser():
    parser = _Parser(prog="capmetrics", description="Caption evaluation metrics (CIDEr-D, SPICE, SPIDEr, SPIDEr-max).")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    score = sub.add_parser("score", help="score a dataset")
    score.add_argument("--dataset", required=True, help="json-lines dataset, one item per line")
    score.add_argument("--metrics", type=_metric_list, default=("spider", "spider-max"),
                       help=f"comma-separated subset of {','.join(METRICS)} (default: spider,spider-max)")
    score.add_argument("--ngram-max", type=int, default=4)
    score.add_argument("--sigma", type=float, default=6.0)
    score.add_argument("--scale", type=float, default=10.0)
    score.add_argument("--top-k", type=int, default=DEFAULT_TOP_K)
    score.add_argument("--selection", choices=SELECTIONS, default="first")
    score.add_argument("--lexicon", help="word<TAB>class file for tuple extraction (default: bundled)")
    score.add_argument("--out", default="-", help="output path (default: stdout)")
    score.add_argument("--format", choices=FORMATS, default="csv")

    analyze = sub.add_parser("analyze", help="diagnostics over a json-lines score report")
    analyze.add_argument("--scores", required=True, help="report written by 'score --format json-lines'")
    analyze.add_argument("--report", choices=REPORTS, required=True)
    analyze.add_argument("--top-k", type=int, default=None, help="beam-curve length (default: shortest candidate list)")
    analyze.add_argument("--out", default="-")
    analyze.add_argument("--format", choices=FORMATS, default="csv")
    return parser


def _score(args):
    try:
        params = CiderParams(args.ngram_max, args.sigma, args.scale)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    lexicon = load_lexicon(args.lexicon) if args.lexicon else None
    config = EvalConfig(
        metrics=args.metrics,
        params=params,
        top_k=args.top_k,
        selection=args.selection,
        lexicon=lexicon,
        lexicon_name=args.lexicon or "default",
    )
    items = load_dataset(args.dataset)
    report = run_evaluation(items, config)
    emit_report(report, args.format, args.out)
    logger.info("scored %d items", len(report.rows))


def _analyze(args):
    items = load_scores(args.scores)
    kind = args.report
    if kind == "agreement":
        cols, rows = ["metric", "value"], [["agreement_accuracy", analysis.agreement_accuracy(items)]]
    elif kind == "correlation":
        cols, rows = ["metric", "value"], [["likelihood_spider_pearson", analysis.likelihood_score_correlation(items)]]
    elif kind == "tfidf-delta":
        cols, rows = ["metric", "value"], [["tfidf_delta_pearson", analysis.tfidf_delta_correlation(items)]]
    elif kind == "beam-hist":
        hist = analysis.best_beam_histogram(items)
        width = max(len(it.scores) for it in items) if items else 0
        cols, rows = ["beam_index", "count"], [[i, hist.get(i, 0)] for i in range(width)]
    else:
        curve = analysis.beam_curve(items, args.top_k)
        cols, rows = ["k", "spider_max"], [[k, v] for k, v in curve.items()]
    write_text(render_table(cols, rows, args.format), args.out)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "score":
            _score(args)
        else:
            _analyze(args)
    except ValidationError as exc:
        print(f"capmetrics: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"capmetrics: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
