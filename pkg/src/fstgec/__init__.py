"""Grammatical error correction with weighted transducer hypothesis spaces.

The package builds a weighted FST over every candidate correction of a
sentence (deletions of frequent tokens, catalog substitutions, at most
one insertion), maps words to subword pieces, and searches the space
with a language-model beam decoder. Around that core live an n-gram LM
trainer, a span-based F0.5 scorer, a penalty tuner, and the corpus
arithmetic used to assemble training data.
"""

from .bpe import (BpeModel, apply_bpe, apply_bpe_sentence, count_word_freqs,
                  decode_bpe, learn_bpe, load_merges, save_merges)
from .cascade import (CascadeResources, PenaltyVector, accept_cost,
                      build_bpe_map_fst, build_deletion_fst, build_edit_fst,
                      build_hypothesis_space, build_input_fst,
                      build_insertion_fst, load_token_list, optimize_acceptor)
from .confusion import (ConfusionCatalog, damerau_levenshtein,
                        extract_dev_deletions, extract_dev_substitutions,
                        generate_spell_candidates, load_confusion_tsv,
                        load_lexicon, merge_catalogs, spell_candidates_catalog)
from .datapipe import (CorpusPair, ParallelCorpus, assemble_training_set,
                       count_by_tag, oversample, read_corpus_tsv,
                       real_synth_ratio, remove_identities, tag_ratio,
                       write_corpus_tsv)
from .decode import DecoderHypothesis, beam_decode, exact_decode
from .errors import (ConfigError, FstgecError, ParseError,
                     ResourceLimitError, StructuralError)
from .fst import (Arc, SymbolTable, WeightedFst, compose, connect,
                  determinize, enumerate_paths, minimize, parse_fst_text,
                  project_output, push_weights, read_fst_text, rm_epsilon,
                  shortest_path, write_fst_text)
from .lm import (LmEnsemble, LmScorer, NgramLm, UniformLm, load_arpa,
                 save_arpa, train_ngram_lm)
from .pipeline import correct_corpus, correct_sentence
from .scoring import (EditKind, EditSpan, EditTypeProfile, M2Record,
                      ScoreReport, apply_edits, count_edit_types,
                      extract_edits, f_beta, format_m2, parse_m2,
                      score_corpus)
from .tuning import TuneResult, golden_section_max, powell_tune

__version__ = "0.1.0"

__all__ = [
    "Arc", "BpeModel", "CascadeResources", "ConfigError", "ConfusionCatalog",
    "CorpusPair", "DecoderHypothesis", "EditKind", "EditSpan",
    "EditTypeProfile", "FstgecError", "LmEnsemble", "LmScorer", "M2Record",
    "NgramLm", "ParallelCorpus", "ParseError", "PenaltyVector",
    "ResourceLimitError", "ScoreReport", "StructuralError", "SymbolTable",
    "TuneResult", "UniformLm", "WeightedFst", "accept_cost", "apply_bpe",
    "apply_bpe_sentence", "apply_edits", "assemble_training_set",
    "beam_decode", "build_bpe_map_fst", "build_deletion_fst",
    "build_edit_fst", "build_hypothesis_space", "build_input_fst",
    "build_insertion_fst", "compose", "connect", "correct_corpus",
    "correct_sentence", "count_by_tag", "count_edit_types",
    "count_word_freqs", "damerau_levenshtein", "decode_bpe", "determinize",
    "enumerate_paths", "exact_decode", "extract_dev_deletions",
    "extract_dev_substitutions", "extract_edits", "f_beta", "format_m2",
    "generate_spell_candidates", "golden_section_max", "learn_bpe",
    "load_arpa", "load_confusion_tsv", "load_lexicon", "load_merges",
    "load_token_list", "merge_catalogs", "minimize", "optimize_acceptor",
    "oversample", "parse_fst_text", "parse_m2", "powell_tune",
    "project_output", "push_weights", "read_corpus_tsv", "read_fst_text",
    "real_synth_ratio", "remove_identities", "rm_epsilon", "save_arpa",
    "save_merges", "score_corpus", "shortest_path",
    "spell_candidates_catalog", "tag_ratio", "train_ngram_lm",
    "write_corpus_tsv", "write_fst_text",
]
