"""Line-delimited JSON datasets: one evaluation item per line.

Record layout::

    {"item_id": "rain.wav",
     "candidates": [{"text": "heavy rain on a tin roof", "likelihood": 0.41,
                     "tuples": [["roof"], ["roof", "tin"]]}, ...],
     "references": ["heavy rain falls onto a thin roof", ...]}

Candidates and references may be plain strings or objects with ``text`` and
optional ``tuples`` (lists of 1 to 3 words); candidates may also carry a
``likelihood`` in [0, 1]. Candidate order is kept as given (beam order).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DuplicateId, EmptyItem, ParseError
from .spice import tuple_set
from .spider import EvalItem
from .text_prep import Caption, normalize, normalize_tokens


def _caption(entry, line_no: int, where: str, allow_likelihood: bool) -> Caption:
    if isinstance(entry, str):
        return normalize(entry)
    if not isinstance(entry, dict) or not isinstance(entry.get("text"), str):
        raise ParseError(line_no, f"{where}: expected a string or an object with a 'text' string")
    likelihood = entry.get("likelihood")
    if likelihood is not None:
        if not allow_likelihood:
            raise ParseError(line_no, f"{where}: references cannot carry a likelihood")
        if isinstance(likelihood, bool) or not isinstance(likelihood, (int, float)) or not 0.0 <= likelihood <= 1.0:
            raise ParseError(line_no, f"{where}: likelihood must be a number in [0, 1]")
        likelihood = float(likelihood)
    tuples = entry.get("tuples")
    if tuples is not None:
        try:
            tuples = tuple_set(_normalized_tuple(t) for t in tuples)
        except (TypeError, ValueError) as exc:
            raise ParseError(line_no, f"{where}: bad tuples ({exc})") from None
    return normalize(entry["text"], likelihood, tuples)


def _normalized_tuple(words) -> tuple:
    if isinstance(words, str) or not isinstance(words, (list, tuple)):
        raise TypeError("each tuple must be a list of words")
    out = []
    for w in words:
        if not isinstance(w, str):
            raise TypeError("tuple words must be strings")
        toks = normalize_tokens(w)
        if len(toks) != 1:
            raise ValueError(f"tuple word {w!r} does not normalise to a single token")
        out.append(toks[0])
    return tuple(out)


def parse_record(line: str, line_no: int) -> EvalItem:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(line_no, f"invalid JSON ({exc.msg})") from None
    if not isinstance(rec, dict):
        raise ParseError(line_no, "record must be a JSON object")
    item_id = rec.get("item_id")
    if not isinstance(item_id, str) or not item_id:
        raise ParseError(line_no, "missing or empty 'item_id'")
    cands, refs = rec.get("candidates"), rec.get("references")
    for name, value in (("candidates", cands), ("references", refs)):
        if value is None or value == []:
            raise EmptyItem(line_no, f"item {item_id!r} has no {name}")
        if not isinstance(value, list):
            raise ParseError(line_no, f"'{name}' must be a list")
    candidates = [_caption(c, line_no, f"candidate {i}", True) for i, c in enumerate(cands)]
    references = [_caption(r, line_no, f"reference {i}", False) for i, r in enumerate(refs)]
    return EvalItem(item_id, tuple(candidates), tuple(references))


def read_dataset(lines: Iterable[str]) -> list[EvalItem]:
    items, seen = [], {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        item = parse_record(line, line_no)
        if item.item_id in seen:
            raise DuplicateId(line_no, f"item_id {item.item_id!r} already used on line {seen[item.item_id]}")
        seen[item.item_id] = line_no
        items.append(item)
    return items


def load_dataset(path) -> list[EvalItem]:
    with Path(path).open(encoding="utf-8") as fh:
        return read_dataset(fh)


def _caption_record(c: Caption, with_likelihood: bool):
    rec = {"text": " ".join(c.tokens)}
    if with_likelihood and c.likelihood is not None:
        rec["likelihood"] = c.likelihood
    if c.tuples is not None:
        rec["tuples"] = [list(t.words) for t in sorted(c.tuples)]
    return rec


def dump_dataset(items: Sequence[EvalItem], path) -> None:
    """Write items back in the input layout (texts are already normalised)."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for it in items:
            rec = {
                "item_id": it.item_id,
                "candidates": [_caption_record(c, True) for c in it.candidates],
                "references": [_caption_record(r, False) for r in it.references],
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def read_caption_table(path, id_column: str = "file_name", prefix: str = "caption_") -> dict[str, list[str]]:
    """Read a Clotho-style captions CSV (``file_name, caption_1 .. caption_5``)."""
    out = {}
    with Path(path).open(encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            cols = sorted((k for k in row if k and k.startswith(prefix)),
                          key=lambda k: int(k[len(prefix):]) if k[len(prefix):].isdigit() else k)
            out.setdefault(row[id_column], []).extend(row[c] for c in cols if row[c])
    return out


def build_items(references: Mapping[str, Sequence[str]],
                candidates: Mapping[str, Sequence[tuple[str, Optional[float]]]]) -> list[EvalItem]:
    """Pair reference captions with (text, likelihood) candidates by item id."""
    items = []
    for item_id in candidates:
        if item_id not in references:
            raise KeyError(f"no references for {item_id!r}")
        cands = tuple(normalize(t, p) for t, p in candidates[item_id])
        refs = tuple(normalize(r) for r in references[item_id])
        items.append(EvalItem(item_id, cands, refs))
    return items
