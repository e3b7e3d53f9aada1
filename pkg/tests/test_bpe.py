import random
import string

import pytest

from fstgec.bpe import (BpeModel, CONTINUATION, END_OF_WORD, apply_bpe,
                        apply_bpe_sentence, count_word_freqs, decode_bpe,
                        learn_bpe, load_merges, save_merges)
from fstgec.errors import ParseError


class TestLearn:
    def test_single_word_prefers_lexicographic_pair(self):
        # "ab" yields pairs (a,b) and (b,</w>) at equal count; the
        # lexicographically smaller pair wins the tie
        model = learn_bpe({"ab": 5}, 1)
        assert model.merges == (("a", "b"),)

    def test_merges_follow_frequency(self):
        model = learn_bpe({"low": 5, "lower": 2}, 2)
        assert model.merges == (("l", "o"), ("lo", "w"))

    def test_stops_below_two_occurrences(self):
        model = learn_bpe({"ab": 1}, 10)
        assert model.merges == ()

    def test_zero_merges(self):
        model = learn_bpe({"abc": 9}, 0)
        assert model.merges == ()
        assert model.num_merges == 0

    def test_merge_budget_respected(self):
        full = learn_bpe({"banana": 8, "bandana": 7}, 50)
        capped = learn_bpe({"banana": 8, "bandana": 7}, 2)
        assert capped.merges == full.merges[:2]


class TestApply:
    def test_fully_merged_word_is_unmarked(self):
        model = learn_bpe({"ab": 5}, 10)
        assert apply_bpe("ab", model) == ["ab"]

    def test_unknown_word_under_empty_model_splits_to_marked_chars(self):
        assert apply_bpe("xyz", BpeModel(())) == ["x@@", "y@@", "z"]

    def test_partial_merges_mark_continuations(self):
        model = learn_bpe({"low": 5, "lower": 2}, 3)
        assert apply_bpe("low", model) == ["low"]
        assert apply_bpe("lower", model) == ["low@@", "e@@", "r"]

    def test_sentence_concatenates_word_pieces(self):
        model = BpeModel(())
        assert apply_bpe_sentence(["ab", "c"], model) == ["a@@", "b", "c"]

    def test_piece_count_shrinks_as_merges_accumulate(self):
        rng = random.Random(11)
        freqs = {"".join(rng.choice("abcd") for _ in range(rng.randint(1, 8))):
                 rng.randint(1, 9) for _ in range(40)}
        model = learn_bpe(freqs, 30)
        for word in list(freqs)[:15]:
            sizes = [len(apply_bpe(word, BpeModel(model.merges[:k])))
                     for k in range(len(model.merges) + 1)]
            assert sizes == sorted(sizes, reverse=True)


class TestDecode:
    def test_round_trip_random_words(self):
        rng = random.Random(22)
        freqs = {"".join(rng.choice(string.ascii_lowercase)
                         for _ in range(rng.randint(1, 10))): rng.randint(1, 9)
                 for _ in range(60)}
        model = learn_bpe(freqs, 40)
        for _ in range(300):
            words = ["".join(rng.choice(string.ascii_lowercase)
                             for _ in range(rng.randint(1, 12)))
                     for _ in range(rng.randint(1, 6))]
            assert decode_bpe(apply_bpe_sentence(words, model)) == words

    def test_dangling_continuation_rejected(self):
        with pytest.raises(ParseError):
            decode_bpe(["un" + CONTINUATION])

    def test_empty_sequence(self):
        assert decode_bpe([]) == []


class TestSerialization:
    def test_round_trip(self, tmp_path):
        model = learn_bpe({"low": 5, "lower": 2, "newest": 6}, 10)
        path = tmp_path / "merges.txt"
        save_merges(model, path)
        assert load_merges(path).merges == model.merges

    def test_file_shape(self, tmp_path):
        path = tmp_path / "merges.txt"
        save_merges(BpeModel((("a", "b"), ("ab", "c"))), path)
        assert path.read_text() == "a b\nab c\n"

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "merges.txt"
        path.write_text("a b\nlonely\n")
        with pytest.raises(ParseError) as err:
            load_merges(path)
        assert "line 2" in str(err.value)


def test_count_word_freqs():
    freqs = count_word_freqs([["a", "b"], ["a"], []])
    assert freqs == {"a": 2, "b": 1}


def test_end_of_word_marker_never_leaks():
    model = learn_bpe({"ab": 5, "abc": 4}, 10)
    for word in ("ab", "abc", "zq"):
        for piece in apply_bpe(word, model):
            assert END_OF_WORD not in piece
