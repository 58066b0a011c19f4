import csv
import json
import subprocess
import sys

import pytest

from capmetrics.cli import main


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def scores(tmp_path, fixtures_dir):
    out = tmp_path / "scores.jsonl"
    assert run("score", "--dataset", fixtures_dir / "corpus3.jsonl", "--metrics", "spider,spider-max",
               "--format", "json-lines", "--out", out) == 0
    return out


def test_score_csv(tmp_path, fixtures_dir):
    out = tmp_path / "r.csv"
    assert run("score", "--dataset", fixtures_dir / "corpus3.jsonl", "--metrics", "cider-d,spice,m-spice",
               "--selection", "max-likelihood", "--top-k", "3", "--out", out) == 0
    text = out.read_text()
    assert "# selection=max-likelihood" in text and "# top_k=3" in text
    header = next(l for l in text.splitlines() if not l.startswith("#"))
    assert header == "item_id,selected,cider_d,spice,m_spice"


def test_score_to_stdout(fixtures_dir, capsys):
    assert run("score", "--dataset", fixtures_dir / "corpus3.jsonl") == 0
    assert "__mean__" in capsys.readouterr().out


def test_custom_lexicon(tmp_path, fixtures_dir):
    out = tmp_path / "r.jsonl"
    assert run("score", "--dataset", fixtures_dir / "corpus3.jsonl", "--metrics", "spice",
               "--lexicon", fixtures_dir / "lexicon.tsv", "--format", "json-lines", "--out", out) == 0
    meta = json.loads(out.read_text().splitlines()[0])
    assert meta["lexicon"].endswith("lexicon.tsv")


def test_determinism(tmp_path, fixtures_dir):
    outs = []
    for i in range(2):
        out = tmp_path / f"run{i}.jsonl"
        assert run("score", "--dataset", fixtures_dir / "corpus3.jsonl", "--metrics",
                   ",".join(["cider", "cider-d", "spice", "m-spice", "spider", "spider-max"]),
                   "--format", "json-lines", "--out", out) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("args", [["--metrics", "bleu"], ["--selection", "random"]])
def test_bad_flag_exit_1(fixtures_dir, args):
    with pytest.raises(SystemExit) as info:
        run("score", "--dataset", fixtures_dir / "corpus3.jsonl", *args)
    assert info.value.code == 1


@pytest.mark.parametrize("args", [["--top-k", "9"], ["--top-k", "0"], ["--sigma", "0"], ["--ngram-max", "0"]])
def test_bad_value_exit_1(fixtures_dir, args):
    assert run("score", "--dataset", fixtures_dir / "corpus3.jsonl", *args) == 1


def test_bad_dataset_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"item_id": "a", "candidates": ["x"]}\n')
    assert run("score", "--dataset", bad) == 1
    assert "line 1" in capsys.readouterr().err


def test_bad_lexicon_exit_1(tmp_path, fixtures_dir):
    lex = tmp_path / "lex.tsv"
    lex.write_text("dog\tanimal\n")
    assert run("score", "--dataset", fixtures_dir / "corpus3.jsonl", "--lexicon", lex) == 1


def test_missing_file_exit_2(tmp_path):
    assert run("score", "--dataset", tmp_path / "nope.jsonl") == 2
    assert run("analyze", "--scores", tmp_path / "nope.jsonl", "--report", "agreement") == 2


def test_unwritable_output_exit_2(tmp_path, fixtures_dir):
    assert run("score", "--dataset", fixtures_dir / "corpus3.jsonl", "--out", tmp_path / "no" / "dir.csv") == 2


def test_analyze_agreement_and_hist(scores, tmp_path):
    out = tmp_path / "a.csv"
    assert run("analyze", "--scores", scores, "--report", "agreement", "--out", out) == 0
    assert out.read_text() == "metric,value\nagreement_accuracy,0.333333\n"
    assert run("analyze", "--scores", scores, "--report", "beam-hist", "--out", out) == 0
    assert list(csv.reader(out.read_text().splitlines())) == [
        ["beam_index", "count"], ["0", "0"], ["1", "2"], ["2", "1"], ["3", "0"], ["4", "0"]]


def test_analyze_curve_and_correlations(scores, tmp_path):
    out = tmp_path / "c.jsonl"
    assert run("analyze", "--scores", scores, "--report", "beam-curve", "--format", "json-lines", "--out", out) == 0
    curve = [json.loads(l) for l in out.read_text().splitlines()]
    assert [c["k"] for c in curve] == [1, 2, 3, 4, 5]
    values = [c["spider_max"] for c in curve]
    assert values == sorted(values)
    for report in ("correlation", "tfidf-delta"):
        assert run("analyze", "--scores", scores, "--report", report, "--out", out) == 0
        value = float(out.read_text().splitlines()[1].split(",")[1])
        assert -1.0 <= value <= 1.0


def test_analyze_rejects_csv_report(tmp_path, fixtures_dir):
    csv_out = tmp_path / "r.csv"
    run("score", "--dataset", fixtures_dir / "corpus3.jsonl", "--out", csv_out)
    assert run("analyze", "--scores", csv_out, "--report", "agreement") == 1


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "capmetrics", "score", "--dataset",
                           str(fixtures_dir / "corpus3.jsonl"), "--metrics", "spider"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1].startswith("__mean__,")
