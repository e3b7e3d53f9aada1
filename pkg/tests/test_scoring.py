"""Edit spans, M2 parsing, and corpus scoring."""

import random

import pytest

from fstgec.errors import ParseError
from fstgec.scoring import (
    EditKind,
    EditSpan,
    M2Record,
    ScoreReport,
    apply_edits,
    count_edit_types,
    extract_edits,
    f_beta,
    format_m2,
    parse_m2,
    score_corpus,
)


# -- EditSpan -------------------------------------------------------------


def test_edit_kind_follows_shape():
    assert EditSpan(1, 1, ("a",)).kind is EditKind.MISSING
    assert EditSpan(1, 2, ("b",)).kind is EditKind.REPLACEMENT
    assert EditSpan(1, 2, ("b", "c")).kind is EditKind.REPLACEMENT
    assert EditSpan(1, 3, ()).kind is EditKind.UNNECESSARY


def test_edit_span_rejects_bad_offsets():
    with pytest.raises(ValueError):
        EditSpan(-1, 0, ("a",))
    with pytest.raises(ValueError):
        EditSpan(3, 2, ("a",))


def test_edit_span_rejects_no_op():
    with pytest.raises(ValueError):
        EditSpan(2, 2, ())


# -- parse_m2 -------------------------------------------------------------

SAMPLE_M2 = """\
S the cat sat on mat
A 4 4|||Missing|||the|||REQUIRED|||-NONE-|||0
A 1 2|||Replacement|||dog|||REQUIRED|||-NONE-|||1

S it is fine
A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0
"""


def test_parse_m2_basic():
    records = parse_m2(SAMPLE_M2)
    assert len(records) == 2
    first = records[0]
    assert first.source == ("the", "cat", "sat", "on", "mat")
    assert first.annotators[0] == [EditSpan(4, 4, ("the",))]
    assert first.annotators[1] == [EditSpan(1, 2, ("dog",))]
    second = records[1]
    assert second.source == ("it", "is", "fine")
    # noop registers the annotator with an empty edit list
    assert second.annotators == {0: []}


def test_parse_m2_none_correction_registers_annotator():
    records = parse_m2("S a b\nA 0 1|||Unnecessary|||-NONE-|||REQUIRED|||-NONE-|||3\n")
    assert records[0].annotators == {3: []}


def test_parse_m2_skips_degenerate_empty_edit():
    # zero-width span with an empty correction changes nothing
    records = parse_m2("S a b\nA 1 1|||Missing||||||REQUIRED|||-NONE-|||0\n")
    assert records[0].annotators == {0: []}


def test_parse_m2_empty_source_line():
    records = parse_m2("S\nA 0 0|||Missing|||hi|||REQUIRED|||-NONE-|||0\n")
    assert records[0].source == ()
    assert records[0].annotators[0] == [EditSpan(0, 0, ("hi",))]


def test_parse_m2_edit_before_source():
    with pytest.raises(ParseError) as exc:
        parse_m2("A 0 1|||Unnecessary||||||REQUIRED|||-NONE-|||0\n")
    assert exc.value.line == 1


def test_parse_m2_blank_line_closes_record():
    text = "S a b\n\nA 0 1|||Unnecessary||||||REQUIRED|||-NONE-|||0\n"
    with pytest.raises(ParseError) as exc:
        parse_m2(text)
    assert exc.value.line == 3


def test_parse_m2_span_outside_source():
    with pytest.raises(ParseError) as exc:
        parse_m2("S a b\nA 1 3|||Replacement|||x|||REQUIRED|||-NONE-|||0\n")
    assert exc.value.line == 2


def test_parse_m2_bad_fields():
    with pytest.raises(ParseError):
        parse_m2("S a\nA 0 1|||only-two\n")
    with pytest.raises(ParseError):
        parse_m2("S a\nA zero 1|||Replacement|||x|||0\n")
    with pytest.raises(ParseError):
        parse_m2("S a\nA 0 1|||Replacement|||x|||ann\n")
    with pytest.raises(ParseError):
        parse_m2("S a\nA 0|||Replacement|||x|||0\n")


def test_parse_m2_unrecognized_line():
    with pytest.raises(ParseError) as exc:
        parse_m2("S a b\nB not a thing\n")
    assert exc.value.line == 2


def test_format_m2_round_trip():
    records = parse_m2(SAMPLE_M2)
    text = format_m2(records)
    assert parse_m2(text) == records


def test_format_m2_exact_text():
    rec = M2Record(("a", "b"), {0: [EditSpan(0, 1, ("c",))]})
    noop = M2Record(("x",), {})
    assert format_m2([rec, noop]) == (
        "S a b\n"
        "A 0 1|||Replacement|||c|||REQUIRED|||-NONE-|||0\n"
        "\n"
        "S x\n"
        "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0\n"
    )


# -- extract_edits / apply_edits ------------------------------------------


def test_extract_identity_is_empty():
    assert extract_edits(["a", "b", "c"], ["a", "b", "c"]) == []


def test_extract_single_ops():
    assert extract_edits(["a", "b", "c"], ["a", "x", "c"]) == [EditSpan(1, 2, ("x",))]
    assert extract_edits(["a", "b", "c"], ["a", "c"]) == [EditSpan(1, 2, ())]
    assert extract_edits(["a", "c"], ["a", "b", "c"]) == [EditSpan(1, 1, ("b",))]


def test_extract_edits_at_boundaries():
    assert extract_edits(["a", "b"], ["x", "b"]) == [EditSpan(0, 1, ("x",))]
    assert extract_edits(["a", "b"], ["a", "b", "c"]) == [EditSpan(2, 2, ("c",))]
    assert extract_edits(["a", "b"], ["b"]) == [EditSpan(0, 1, ())]


def test_extract_merges_adjacent_columns():
    # b and c both disappear into x: one span, not two
    assert extract_edits(["a", "b", "c", "d"], ["a", "x", "d"]) == [
        EditSpan(1, 3, ("x",))
    ]
    assert extract_edits(["a", "d"], ["a", "x", "y", "d"]) == [
        EditSpan(1, 1, ("x", "y"))
    ]


def test_extract_separated_edits_stay_separate():
    assert extract_edits(["a", "b", "c", "d", "e"], ["a", "x", "c", "y", "e"]) == [
        EditSpan(1, 2, ("x",)),
        EditSpan(3, 4, ("y",)),
    ]


def test_extract_apply_round_trip_random():
    rng = random.Random(20240817)
    vocab = ["a", "b", "c", "d", "e"]
    for _ in range(200):
        src = [rng.choice(vocab) for _ in range(rng.randint(0, 9))]
        hyp = [rng.choice(vocab) for _ in range(rng.randint(0, 9))]
        edits = extract_edits(src, hyp)
        assert apply_edits(src, edits) == hyp
        # spans come out sorted with at least one matched token between them
        for prev, nxt in zip(edits, edits[1:]):
            assert prev.end < nxt.start
        if src == hyp:
            assert edits == []


def test_apply_edits_rejects_overlap():
    with pytest.raises(ValueError):
        apply_edits(["a", "b", "c"], [EditSpan(0, 2, ("x",)), EditSpan(1, 3, ("y",))])
    with pytest.raises(ValueError):
        apply_edits(["a"], [EditSpan(0, 2, ("x",))])


# -- metrics --------------------------------------------------------------


def test_f_beta_hand_values():
    assert f_beta(0.5, 0.5, 1.0) == pytest.approx(0.5)
    assert f_beta(1.0, 0.0, 0.5) == 0.0
    assert f_beta(0.0, 0.0, 0.5) == 0.0
    # beta 0.5 weights precision twice as much as recall
    assert f_beta(0.8, 0.2, 0.5) > f_beta(0.2, 0.8, 0.5)


def test_f_beta_monotone_in_precision():
    rng = random.Random(7)
    for _ in range(200):
        r = rng.uniform(0.05, 1.0)
        p1 = rng.uniform(0.0, 0.99)
        p2 = rng.uniform(p1 + 0.005, 1.0)
        assert f_beta(p2, r, 0.5) > f_beta(p1, r, 0.5)


def test_score_report_conventions():
    assert ScoreReport(0, 0, 5).precision == 1.0
    assert ScoreReport(0, 5, 0).recall == 1.0
    assert ScoreReport(0, 0, 0).f_half == pytest.approx(1.0)
    assert ScoreReport(1, 2, 3).line() == "1 2 3 0.3333 0.2500 0.3125"


# -- score_corpus ---------------------------------------------------------


def gold_record(source, edits, annotator=0):
    return M2Record(tuple(source), {annotator: list(edits)})


def test_score_corpus_perfect_and_identity():
    src = ["the", "cat", "sat"]
    edits = [EditSpan(1, 2, ("dog",))]
    rec = gold_record(src, edits)
    fixed = " ".join(apply_edits(src, edits))
    assert score_corpus([fixed], [rec]) == ScoreReport(1, 0, 0)
    # leaving the sentence alone: no fp, all gold edits missed
    assert score_corpus([" ".join(src)], [rec]) == ScoreReport(0, 0, 1)


def test_score_corpus_counts_fp():
    rec = gold_record(["a", "b"], [])
    assert score_corpus(["a x"], [rec]) == ScoreReport(0, 1, 0)


def test_score_corpus_length_mismatch():
    with pytest.raises(ValueError):
        score_corpus(["a"], [])


def test_score_corpus_picks_matching_annotator():
    src = ("the", "cat", "sat")
    rec = M2Record(src, {
        0: [EditSpan(0, 1, ("a",))],
        1: [EditSpan(1, 2, ("dog",))],
    })
    assert score_corpus(["the dog sat"], [rec]) == ScoreReport(1, 0, 0)
    assert score_corpus(["a cat sat"], [rec]) == ScoreReport(1, 0, 0)


def test_score_corpus_annotator_choice_is_per_sentence():
    src = ("a", "b")
    ann = {0: [EditSpan(0, 1, ("x",))], 1: [EditSpan(1, 2, ("y",))]}
    recs = [M2Record(src, dict(ann)), M2Record(src, dict(ann))]
    # sentence 1 matches annotator 0, sentence 2 matches annotator 1
    assert score_corpus(["x b", "a y"], recs) == ScoreReport(2, 0, 0)


def test_score_corpus_order_invariant():
    rng = random.Random(99)
    vocab = ["a", "b", "c", "d"]
    recs = []
    hyps = []
    for _ in range(30):
        src = [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
        hyp = [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
        gold = [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
        recs.append(gold_record(src, extract_edits(src, gold)))
        hyps.append(" ".join(hyp))
    forward = score_corpus(hyps, recs)
    backward = score_corpus(hyps[::-1], recs[::-1])
    assert forward == backward


def test_score_corpus_prefers_noop_annotator_for_unchanged_hyp():
    rec = M2Record(("a", "b"), {0: [], 1: [EditSpan(0, 1, ("x",))]})
    # the hypothesis changes nothing; the noop annotator scores 0/0/0
    assert score_corpus(["a b"], [rec]) == ScoreReport(0, 0, 0)


def test_score_corpus_record_without_annotators():
    rec = M2Record(("a", "b"), {})
    assert score_corpus(["a b"], [rec]) == ScoreReport(0, 0, 0)
    assert score_corpus(["a x"], [rec]) == ScoreReport(0, 1, 0)


# -- edit-type profile -----------------------------------------------------


def profile_fixture():
    recs = [
        M2Record(("a", "b", "c"), {
            0: [EditSpan(0, 0, ("x",)), EditSpan(1, 2, ("y",))],
            1: [EditSpan(2, 3, ())],  # ignored: not the first annotator
        }),
        M2Record(("d", "e"), {0: [EditSpan(0, 1, ())]}),
        M2Record(("f",), {}),
    ]
    return recs


def test_count_edit_types_uses_first_annotator():
    profile = count_edit_types(profile_fixture())
    assert profile.sentences == 3
    assert profile.words == 6
    assert profile.counts == {
        EditKind.MISSING: 1,
        EditKind.REPLACEMENT: 1,
        EditKind.UNNECESSARY: 1,
    }
    assert profile.total == 3


def test_profile_rows_and_rates():
    profile = count_edit_types(profile_fixture())
    rows = profile.rows()
    assert [r[0] for r in rows] == ["Missing", "Replacement", "Unnecessary", "Total"]
    assert rows[-1][1] == sum(r[1] for r in rows[:-1])
    assert profile.per_sentence() == pytest.approx(1.0)
    assert profile.per_word() == pytest.approx(0.5)
    assert profile.per_sentence(EditKind.MISSING) == pytest.approx(1 / 3)


def test_profile_empty_corpus():
    profile = count_edit_types([])
    assert profile.total == 0
    assert profile.per_sentence() == 0.0
    assert profile.per_word() == 0.0
