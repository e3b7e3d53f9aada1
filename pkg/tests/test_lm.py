"""N-gram training, smoothing arithmetic, ARPA round trips, ensembles."""

import math
import random

import pytest
from conftest import random_corpus, score_string

from fstgec.errors import ConfigError, ParseError
from fstgec.lm import (
    BOS,
    EOS,
    UNK,
    LmEnsemble,
    NgramLm,
    UniformLm,
    load_arpa,
    save_arpa,
    train_ngram_lm,
)

TINY = [["a", "b"], ["a", "b"], ["a", "c"]]


def tiny_lm() -> NgramLm:
    return train_ngram_lm(TINY, order=2)


# -- smoothing arithmetic, derived by hand for the tiny corpus ---------------
#
# Bigram counts: (<s> a) 3, (a b) 2, (b </s>) 2, (a c) 1, (c </s>) 1.
# Unigram continuation counts: a 1, b 1, c 1, </s> 2 (total 5).
# Bigram count-of-counts n1=2 n2=2 n3=1: Y=1/3, D=(1/3, 3/2, 3).
# Unigram count-of-counts n1=3 n2=1: Y=3/5, D=(3/5, 2, 3/2).


def expected_unigrams() -> dict[str, float]:
    total = 5
    vocab_size = 5  # a b c </s> <unk>
    removed = 3 * 0.6 + min(2.0, 2)  # three singletons, one doubleton
    gamma = removed / total
    uni = {
        "a": (1 - 0.6) / total + gamma / vocab_size,
        "b": (1 - 0.6) / total + gamma / vocab_size,
        "c": (1 - 0.6) / total + gamma / vocab_size,
        EOS: (2 - 2.0) / total + gamma / vocab_size,
        UNK: 0.0 / total + gamma / vocab_size,
    }
    return uni


def test_unigram_distribution_matches_hand_arithmetic():
    lm = tiny_lm()
    uni = expected_unigrams()
    assert sum(uni.values()) == pytest.approx(1.0, abs=1e-12)
    for w, p in uni.items():
        assert lm.probs[(w,)] == pytest.approx(math.log10(p), abs=1e-12), w


def test_bigram_distribution_matches_hand_arithmetic():
    lm = tiny_lm()
    uni = expected_unigrams()
    d1, d2 = 1 / 3, 1.5

    # context "a": b seen twice, c once, total 3
    gamma_a = (min(d2, 2) + min(d1, 1)) / 3
    p_b_a = (2 - d2) / 3 + gamma_a * uni["b"]
    p_c_a = (1 - d1) / 3 + gamma_a * uni["c"]
    # context "b": </s> twice; context "c": </s> once
    gamma_b = min(d2, 2) / 2
    p_eos_b = (2 - d2) / 2 + gamma_b * uni[EOS]
    gamma_c = min(d1, 1) / 1
    p_eos_c = (1 - d1) / 1 + gamma_c * uni[EOS]
    # sentence-start context keeps raw counts: "a" 3 times, total 3
    gamma_s = min(3.0, 3) / 3
    p_a_s = (3 - 3.0) / 3 + gamma_s * uni["a"]

    expect = {
        ("a", "b"): p_b_a,
        ("a", "c"): p_c_a,
        ("b", EOS): p_eos_b,
        ("c", EOS): p_eos_c,
        (BOS, "a"): p_a_s,
    }
    for gram, p in expect.items():
        assert lm.probs[gram] == pytest.approx(math.log10(p), abs=1e-12), gram

    for h, g in ((("a",), gamma_a), (("b",), gamma_b),
                 (("c",), gamma_c), ((BOS,), gamma_s)):
        assert lm.backoffs[h] == pytest.approx(math.log10(g), abs=1e-12), h


def test_backed_off_lookup_multiplies_escape_weight():
    lm = tiny_lm()
    uni = expected_unigrams()
    gamma_a = (1.5 + 1 / 3) / 3
    # "a a" was never seen: escape through context "a" to the unigram
    assert lm.logprob(("a",), "a") == pytest.approx(
        math.log10(gamma_a) + math.log10(uni["a"]), abs=1e-12)


def test_start_marker_placeholder_is_unusable():
    lm = tiny_lm()
    assert lm.probs[(BOS,)] == -99.0
    with pytest.raises(ConfigError):
        lm.logprob(("a",), BOS)


def test_sentence_cost_is_negative_log_product():
    lm = tiny_lm()
    uni = expected_unigrams()
    gamma_a = (1.5 + 1 / 3) / 3
    p_a_s = uni["a"]  # start context escapes with weight 1
    p_b_a = (2 - 1.5) / 3 + gamma_a * uni["b"]
    p_eos_b = (2 - 1.5) / 2 + 0.75 * uni[EOS]
    want = -math.log(p_a_s * p_b_a * p_eos_b)
    assert lm.sentence_cost(["a", "b"]) == pytest.approx(want, abs=1e-9)


# -- distributional properties ------------------------------------------------


def observed_contexts(lm: NgramLm):
    yield ()
    yield lm.start_state()
    for h in lm.backoffs:
        yield h


def test_conditionals_sum_to_one():
    rng = random.Random(501)
    for order in (2, 3, 4):
        corpus = random_corpus(rng, n_sentences=40, max_len=7)
        lm = train_ngram_lm(corpus, order)
        for h in observed_contexts(lm):
            total = sum(10.0 ** lm.logprob(h, w) for w in lm.vocab)
            assert total == pytest.approx(1.0, abs=1e-6), h


def test_costs_are_nonnegative():
    rng = random.Random(502)
    lm = train_ngram_lm(random_corpus(rng), 3)
    state = lm.start_state()
    for tok in ["a", "zzz", "b", "qq", "e"]:
        cost, state = lm.score_step(state, tok)
        assert cost >= 0.0
    assert lm.final_cost(state) >= 0.0


def test_oov_scores_through_unknown_class():
    lm = tiny_lm()
    state = lm.start_state()
    cost_oov, next_oov = lm.score_step(state, "zebra")
    cost_unk, next_unk = lm.score_step(state, UNK)
    assert cost_oov == cost_unk
    assert next_oov == next_unk == (UNK,)
    assert math.isfinite(lm.sentence_cost(["zebra", "b"]))


def test_unknown_class_required():
    lm = NgramLm(2, {("a",): math.log10(0.5), (EOS,): math.log10(0.5)},
                 {}, frozenset({"a", EOS}))
    with pytest.raises(ConfigError):
        lm.score_step(("a",), "zebra")


def test_training_is_order_invariant():
    rng = random.Random(503)
    corpus = random_corpus(rng, n_sentences=25, max_len=6)
    shuffled = list(corpus)
    rng.shuffle(shuffled)
    a = train_ngram_lm(corpus, 3)
    b = train_ngram_lm(shuffled, 3)
    assert set(a.probs) == set(b.probs)
    for gram in a.probs:
        assert a.probs[gram] == pytest.approx(b.probs[gram], abs=1e-12)


def test_higher_order_trains_and_scores():
    rng = random.Random(504)
    corpus = random_corpus(rng, n_sentences=50, max_len=8)
    lm = train_ngram_lm(corpus, 5)
    assert lm.order == 5
    assert lm.start_state() == (BOS,) * 4
    assert math.isfinite(lm.sentence_cost(["a", "b", "c", "d", "e", "a"]))


# -- validation ---------------------------------------------------------------


def test_train_rejects_bad_order():
    for order in (1, 6, 0, -2, 2.5, "3"):
        with pytest.raises(ValueError):
            train_ngram_lm(TINY, order)


def test_train_rejects_bad_corpus():
    with pytest.raises(ValueError):
        train_ngram_lm([], 2)
    with pytest.raises(ValueError):
        train_ngram_lm([["a"]], 3)
    for marker in (BOS, EOS, UNK):
        with pytest.raises(ValueError):
            train_ngram_lm([["a", marker, "b"]], 2)


# -- ARPA ----------------------------------------------------------------------


def test_arpa_round_trip_exact(tmp_path):
    rng = random.Random(505)
    for order in (2, 3):
        lm = train_ngram_lm(random_corpus(rng, n_sentences=35), order)
        path = tmp_path / f"model{order}.arpa"
        save_arpa(lm, path)
        back = load_arpa(path)
        assert back.order == lm.order
        assert back.vocab == lm.vocab
        assert back.probs == lm.probs
        nonzero = {h: b for h, b in lm.backoffs.items() if b != 0.0}
        assert back.backoffs == nonzero
        for _ in range(20):
            sent = [rng.choice("abcdez") for _ in range(rng.randint(1, 6))]
            assert back.sentence_cost(sent) == pytest.approx(
                lm.sentence_cost(sent), abs=1e-9)


def test_arpa_file_shape(tmp_path):
    lm = tiny_lm()
    path = tmp_path / "tiny.arpa"
    save_arpa(lm, path)
    text = path.read_text(encoding="utf-8")
    assert text.startswith("\\data\\\n")
    assert "\\1-grams:" in text and "\\2-grams:" in text
    assert text.rstrip().endswith("\\end\\")
    assert f"ngram 1={sum(1 for g in lm.probs if len(g) == 1)}" in text


def test_load_arpa_errors(tmp_path):
    cases = [
        ("no header\n", "outside"),
        ("\\data\\\nngram one=2\n", "declaration"),
        ("\\data\\\nngram 1=1\n\\1-grams:\n-0.3\ta b\n", "section"),
        ("\\data\\\nngram 1=1\n\\1-grams:\nxx\ta\n", "log-probability"),
        ("\\data\\\nngram 1=2\n\\1-grams:\n-0.3\ta\n", "declared"),
        ("\\data\\\nngram 1=1\n\\1-grams:\n-0.3\ta\tzz\n", "backoff"),
        ("\\data\\\nngram 1=1\n\\1-grams:\n-0.3\ta\n", "order"),
        ("", "data"),
    ]
    for i, (text, needle) in enumerate(cases):
        path = tmp_path / f"bad{i}.arpa"
        path.write_text(text, encoding="utf-8")
        with pytest.raises(ParseError) as exc:
            load_arpa(path)
        assert needle in str(exc.value), (i, str(exc.value))


def test_load_arpa_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_arpa(tmp_path / "absent.arpa")


# -- neutral scorer and ensembles ------------------------------------------------


def test_uniform_lm_charges_flat_rates():
    lm = UniformLm(step_cost=0.5, eos_cost=2.0)
    assert score_string(lm, ["x", "y", "z"]) == pytest.approx(3.5)
    assert score_string(lm, []) == pytest.approx(2.0)


def test_ensemble_averages_member_costs():
    lm = tiny_lm()
    ens = LmEnsemble((lm, UniformLm()))
    for sent in (["a", "b"], ["a", "c"], ["b"]):
        assert score_string(ens, sent) == pytest.approx(
            lm.sentence_cost(sent) / 2, abs=1e-12)
    same = LmEnsemble((lm, lm, lm))
    assert score_string(same, ["a", "b"]) == pytest.approx(
        lm.sentence_cost(["a", "b"]), abs=1e-12)


def test_ensemble_needs_members():
    with pytest.raises(ConfigError):
        LmEnsemble(())
