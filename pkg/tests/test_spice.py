import random

import pytest
from hypothesis import given, strategies as st

from capmetrics.errors import LexiconError, NoCandidates
from capmetrics.spice import (
    SemanticTuple,
    caption_tuples,
    default_lexicon,
    extract_tuples,
    load_lexicon,
    m_spice,
    merge_tuples,
    parse_lexicon,
    precision_recall,
    spice,
    spice_fscore,
    tuple_set,
)
from capmetrics.text_prep import Caption, normalize

T = SemanticTuple.of


@pytest.fixture
def lexicon(fixtures_dir):
    return load_lexicon(fixtures_dir / "lexicon.tsv")


def test_tuple_arity_enforced():
    assert T("goat").kind == "object"
    assert T("goat", "small").kind == "attribute"
    assert T("man", "speaks", "goat").kind == "relation"
    with pytest.raises(ValueError):
        SemanticTuple("object", ("a", "b"))
    with pytest.raises(ValueError):
        T()


def test_extract_single_object():
    lex = parse_lexicon(["goat\tnoun", "bleats\tverb"])
    assert extract_tuples(normalize("a goat bleats"), lex) == {T("goat")}


def test_extract_relation(lexicon):
    # man(noun) speaks(verb) goat(noun) bleats(verb): one relation, two objects
    got = extract_tuples(normalize("a man speaks and a goat bleats"), lexicon)
    assert got == {T("man"), T("goat"), T("man", "speaks", "goat")}


def test_extract_attributes_and_relation(lexicon):
    got = extract_tuples(normalize("heavy rain is falling on a tin roof"), lexicon)
    assert got == {T("rain"), T("roof"), T("rain", "heavy"), T("roof", "tin"),
                   T("rain", "falling", "roof")}


def test_extract_adjective_must_be_adjacent(lexicon):
    got = extract_tuples(normalize("heavy and rain"), lexicon)
    assert got == {T("rain")}


def test_extract_empty(lexicon):
    assert extract_tuples(normalize(""), lexicon) == frozenset()


def test_extract_deterministic():
    cap = normalize("a small dog barks at a loud car")
    assert extract_tuples(cap) == extract_tuples(normalize("a small dog barks at a loud car"))
    assert extract_tuples(cap) == {T("dog"), T("car"), T("dog", "small"), T("car", "loud"),
                                   T("dog", "barks", "car")}


def test_annotations_bypass_extractor(lexicon):
    cap = Caption("a goat bleats", ("a", "goat", "bleats"), None, frozenset({T("sheep")}))
    assert caption_tuples(cap, lexicon) == {T("sheep")}


def test_default_lexicon_loads():
    lex = default_lexicon()
    assert lex["goat"] == "noun" and lex["bleats"] == "verb" and lex["heavy"] == "adj"


@pytest.mark.parametrize("lines, fragment", [
    (["goat\tnoun", "bleats\tverbish"], ":2: unknown class"),
    (["goat noun"], ":1: expected"),
    (["goat\tnoun", "goat\tverb"], ":2: 'goat' already listed"),
    (["Goat\tnoun"], ":1: word"),
])
def test_lexicon_errors_name_the_line(lines, fragment):
    with pytest.raises(LexiconError, match=fragment):
        parse_lexicon(lines)


def test_lexicon_file_errors(tmp_path):
    bad = tmp_path / "lex.tsv"
    bad.write_text("# comment\n\nrain\tnoun\nfall\tadverb\n")
    with pytest.raises(LexiconError, match=r"lex.tsv:4"):
        load_lexicon(bad)


def test_fscore_examples():
    a = {T("a"), T("b")}
    assert spice_fscore(frozenset(a), frozenset(a)) == 1.0
    assert spice_fscore(frozenset({T("a")}), frozenset({T("b")})) == 0.0
    r = frozenset({T("a"), T("b"), T("c"), T("d")})
    assert spice_fscore(frozenset(a), r) == pytest.approx(2 / 3, abs=1e-15)


def test_fscore_empty_sets():
    assert spice_fscore(frozenset(), frozenset({T("a")})) == 0.0
    assert spice_fscore(frozenset({T("a")}), frozenset()) == 0.0
    assert spice_fscore(frozenset(), frozenset()) == 0.0


def test_m_spice_examples():
    t1, t2, t3 = T("dog"), T("car"), T("rain")
    ref = frozenset({t1, t3})
    assert m_spice([frozenset({t1, t2})], ref) == spice_fscore(frozenset({t1, t2}), ref)
    assert m_spice([frozenset({t1}), frozenset({t3})], ref) == 1.0
    assert m_spice([frozenset({t1}), frozenset({t2})], ref) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(NoCandidates):
        m_spice([], ref)


def test_spice_merges_references(lexicon):
    refs = [normalize("a man speaks"), normalize("a goat bleats")]
    assert spice(normalize("a goat and a man"), refs, lexicon) == 1.0


def test_tuple_set_duplicates_collapse():
    assert tuple_set([("dog",), ("dog",), T("dog")]) == {T("dog")}


tuples = st.frozensets(st.sampled_from([T(w) for w in "abcdefg"] + [T("a", "x"), T("b", "y", "c")]))


@given(tuples, tuples)
def test_fscore_is_harmonic_mean_and_swap_symmetric(c, r):
    f = spice_fscore(c, r)
    assert 0.0 <= f <= 1.0
    p, rc = precision_recall(c, r)
    if p + rc:
        assert f == pytest.approx(2 * p * rc / (p + rc))
    p2, rc2 = precision_recall(r, c)
    assert (p2, rc2) == (rc, p)
    assert spice_fscore(r, c) == pytest.approx(f)


@given(st.lists(tuples, min_size=1, max_size=5), tuples)
def test_merged_recall_dominates(cands, r):
    merged = precision_recall(merge_tuples(cands), r)[1]
    for c in cands:
        assert merged >= precision_recall(c, r)[1]


@given(st.lists(st.sampled_from([T(w) for w in "abcd"]), min_size=1), tuples)
def test_binarization(seq, r):
    assert spice_fscore(tuple_set(seq + seq), r) == spice_fscore(tuple_set(seq), r)
