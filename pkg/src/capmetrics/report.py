"""Corpus evaluation runs and their on-disk reports."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .analysis import ScoredItem
from .cider import CiderParams, pack_caption, pack_references, score_packed, tfidf_vector
from .errors import (
    BadTopK,
    EmptyCorpus,
    MissingLikelihood,
    ParseError,
    RaggedCandidates,
    ValidationError,
)
from .spice import Lexicon, caption_tuples, m_spice
from .spider import DEFAULT_TOP_K, EvalItem, ItemScorer, SpiderScore, argmax, corpus_idf
from .text_prep import ngram_profile

METRICS = ("cider", "cider-d", "spice", "m-spice", "spider", "spider-max")
SELECTIONS = ("first", "max-likelihood", "oracle-spider")
FORMATS = ("csv", "json-lines")
MEAN_ROW_ID = "__mean__"


@dataclass(frozen=True)
class EvalConfig:
    metrics: tuple[str, ...] = ("spider", "spider-max")
    params: CiderParams = CiderParams()
    top_k: int = DEFAULT_TOP_K
    selection: str = "first"
    lexicon: Optional[Lexicon] = None
    lexicon_name: str = "default"

    def __post_init__(self):
        if not self.metrics:
            raise ValidationError("at least one metric is required")
        unknown = [m for m in self.metrics if m not in METRICS]
        if unknown:
            raise ValidationError(f"unknown metric(s) {unknown}; choose from {list(METRICS)}")
        if self.selection not in SELECTIONS:
            raise ValidationError(f"unknown selection {self.selection!r}; choose from {list(SELECTIONS)}")
        if self.top_k < 1:
            raise BadTopK(f"top_k must be >= 1, got {self.top_k}")
        # canonical column order regardless of how metrics were listed
        object.__setattr__(self, "metrics", tuple(m for m in METRICS if m in self.metrics))

    @property
    def uses_window(self) -> bool:
        return self.selection == "oracle-spider" or "spider-max" in self.metrics or "m-spice" in self.metrics


@dataclass
class ItemRow:
    item_id: str
    selected: int
    values: dict[str, float]
    spider_max_index: Optional[int] = None


@dataclass
class CandidateRow:
    likelihood: Optional[float]
    cider_d: float
    spice: float
    spider: float
    tfidf_mass: float


@dataclass
class ScoreReport:
    metadata: dict
    rows: list[ItemRow]
    aggregates: dict[str, float]
    candidates: dict[str, list[CandidateRow]] = field(default_factory=dict)

    @property
    def columns(self) -> list[str]:
        cols = ["item_id", "selected"] + [m.replace("-", "_") for m in self.metadata["metrics"]]
        if "spider-max" in self.metadata["metrics"]:
            cols.append("spider_max_index")
        return cols


def _select(rule: str, item: EvalItem, spider_values: Sequence[float], top_k: int) -> int:
    if rule == "first":
        return 0
    if rule == "max-likelihood":
        for i, c in enumerate(item.candidates):
            if c.likelihood is None:
                raise MissingLikelihood(item.item_id, i)
        return argmax([c.likelihood for c in item.candidates])
    return argmax(spider_values[:top_k])


def run_evaluation(items: Sequence[EvalItem], config: EvalConfig = EvalConfig()) -> ScoreReport:
    """Score every item under ``config``; the IDF table is built once over all references."""
    if len(items) == 0:
        raise EmptyCorpus("dataset has no items")
    params = config.params
    if config.uses_window:
        for it in items:
            if len(it.candidates) < config.top_k:
                raise RaggedCandidates(it.item_id, len(it.candidates), config.top_k)
    idf = corpus_idf(items, params)
    stemmed_idf = corpus_idf(items, params, stemmed=True) if "cider" in config.metrics else None

    rows, cand_rows = [], {}
    for it in sorted(items, key=lambda x: x.item_id):
        scorer = ItemScorer(it.references, idf, params, config.lexicon)
        scores: list[SpiderScore] = [scorer.score(c) for c in it.candidates]
        spider_values = [s.spider for s in scores]
        sel = _select(config.selection, it, spider_values, config.top_k)
        values = {}
        for metric in config.metrics:
            key = metric.replace("-", "_")
            if metric == "cider":
                refs = pack_references(it.references, stemmed_idf, params.n_max)
                cand = pack_caption(it.candidates[sel], stemmed_idf, params.n_max)
                values[key] = score_packed(cand, refs, params, clip=False, use_penalty=False)
            elif metric == "cider-d":
                values[key] = scores[sel].cider_d
            elif metric == "spice":
                values[key] = scores[sel].spice
            elif metric == "spider":
                values[key] = scores[sel].spider
            elif metric == "m-spice":
                window = [caption_tuples(c, config.lexicon) for c in it.candidates[:config.top_k]]
                values[key] = m_spice(window, scorer.reference_tuples)
            elif metric == "spider-max":
                best = argmax(spider_values[:config.top_k])
                values[key] = spider_values[best]
        row = ItemRow(it.item_id, sel, values)
        if "spider-max" in config.metrics:
            row.spider_max_index = argmax(spider_values[:config.top_k])
        rows.append(row)
        cand_rows[it.item_id] = [
            CandidateRow(c.likelihood, s.cider_d, s.spice, s.spider,
                         tfidf_vector(ngram_profile(c, params.n_max), idf).mass())
            for c, s in zip(it.candidates, scores)
        ]

    aggregates = {}
    for metric in config.metrics:
        key = metric.replace("-", "_")
        aggregates[key] = math.fsum(r.values[key] for r in rows) / len(rows)
    metadata = {
        "toolkit": "capmetrics",
        "version": __version__,
        "metrics": list(config.metrics),
        "ngram_max": params.n_max,
        "sigma": params.sigma,
        "scale": params.scale,
        "top_k": config.top_k,
        "selection": config.selection,
        "lexicon": config.lexicon_name,
        "num_items": len(rows),
    }
    return ScoreReport(metadata, rows, aggregates, cand_rows)


def _num(x: float) -> str:
    if abs(x) < 5e-7:
        x = 0.0
    return f"{x:.6f}"


def _json(obj) -> str:
    """Compact JSON with every float printed with exactly six decimals."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(json.dumps(k) + ":" + _json(v) for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_json(v) for v in obj) + "]"
    return json.dumps(obj, ensure_ascii=False)


def _row_dict(report: ScoreReport, row: ItemRow) -> dict:
    out = {"item_id": row.item_id, "selected": row.selected}
    for key in report.columns[2:]:
        out[key] = row.spider_max_index if key == "spider_max_index" else row.values[key]
    return out


def render_json_lines(report: ScoreReport) -> str:
    lines = [_json({"type": "meta", **report.metadata})]
    for row in report.rows:
        rec = {"type": "item", **_row_dict(report, row)}
        rec["candidates"] = [
            {"index": i, "likelihood": c.likelihood, "cider_d": c.cider_d, "spice": c.spice,
             "spider": c.spider, "tfidf_mass": c.tfidf_mass}
            for i, c in enumerate(report.candidates.get(row.item_id, []))
        ]
        lines.append(_json(rec))
    lines.append(_json({"type": "aggregate", **report.aggregates}))
    return "\n".join(lines) + "\n"


def render_csv(report: ScoreReport) -> str:
    buf = io.StringIO()
    for key, value in report.metadata.items():
        if isinstance(value, list):
            value = ",".join(value)
        elif isinstance(value, float):
            value = _num(value)
        buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    cols = report.columns
    writer.writerow(cols)
    for row in report.rows:
        d = _row_dict(report, row)
        writer.writerow([_num(v) if isinstance(v, float) else v for v in (d[c] for c in cols)])
    mean = [MEAN_ROW_ID, ""]
    for key in cols[2:]:
        mean.append("" if key == "spider_max_index" else _num(report.aggregates[key]))
    writer.writerow(mean)
    return buf.getvalue()


def render_table(columns: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    """Render a small analysis table (histogram, curve, scalar) as csv or json-lines."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_num(v) if isinstance(v, float) else v for v in r])
        return buf.getvalue()
    return "".join(_json(dict(zip(columns, r))) + "\n" for r in rows)


def write_text(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def emit_report(report: ScoreReport, fmt: str, path) -> None:
    if fmt not in FORMATS:
        raise ValidationError(f"unknown format {fmt!r}; choose from {list(FORMATS)}")
    text = render_csv(report) if fmt == "csv" else render_json_lines(report)
    write_text(text, path)


def read_scores(lines) -> list[ScoredItem]:
    """Rebuild per-candidate scores from a json-lines report."""
    items = []
    saw_meta = False
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            raise ParseError(line_no, "not a json-lines score report (csv reports cannot be analysed)") from None
        kind = rec.get("type") if isinstance(rec, dict) else None
        if kind == "meta":
            saw_meta = True
        elif kind == "item":
            cands = rec.get("candidates") or []
            if not cands:
                raise ParseError(line_no, f"item {rec.get('item_id')!r} has no per-candidate scores")
            items.append(ScoredItem(
                rec["item_id"],
                tuple(c.get("likelihood") for c in cands),
                tuple(SpiderScore(c["cider_d"], c["spice"]) for c in cands),
                tuple(c["tfidf_mass"] for c in cands),
            ))
        elif kind != "aggregate":
            raise ParseError(line_no, "unknown record type")
    if not saw_meta:
        raise ParseError(1, "score report has no meta record")
    return items


def load_scores(path) -> list[ScoredItem]:
    with Path(path).open(encoding="utf-8") as fh:
        return read_scores(fh)
