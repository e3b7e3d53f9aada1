"""Command-line front end for batch correction workflows.

Every command exits 0 on success, 2 on I/O failures, 3 on validation
failures (bad values, malformed files), and 4 on anything else, so
shell pipelines can tell the failure classes apart.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace
from typing import Sequence

from .bpe import (BpeModel, DEFAULT_NUM_MERGES, apply_bpe_sentence,
                  count_word_freqs, learn_bpe, load_merges, save_merges)
from .cascade import (CascadeResources, DEFAULT_DELETABLE_TOKENS,
                      DEFAULT_INSERTABLE_TOKENS, PenaltyVector,
                      load_token_list)
from .confusion import (ConfusionCatalog, load_confusion_tsv, load_lexicon,
                        merge_catalogs, spell_candidates_catalog)
from .datapipe import (assemble_training_set, read_corpus_tsv,
                       real_synth_ratio, write_corpus_tsv)
from .errors import ConfigError, ParseError, StructuralError
from .lm import LmEnsemble, LmScorer, UniformLm, load_arpa, save_arpa, train_ngram_lm
from .pipeline import correct_corpus
from .scoring import count_edit_types, parse_m2, score_corpus
from .tuning import (DEFAULT_LAMBDA_MAX, DEFAULT_MAX_CYCLES, DEFAULT_TOL,
                     powell_tune)

EXIT_OK = 0
EXIT_IO = 2
EXIT_VALIDATION = 3
EXIT_INTERNAL = 4

_PATH_KEYS = ("deletions", "insertions", "lexicon", "bpe")
_MULTI_PATH_KEYS = ("confusion", "lm")


@dataclass(frozen=True)
class RunConfig:
    """Merged settings: defaults, then config file, then command line."""

    deletions: str | None = None
    insertions: str | None = None
    confusion: tuple[str, ...] = ()
    lexicon: str | None = None
    bpe: str | None = None
    lm: tuple[str, ...] = ()
    beam: int = 8
    lambda_del: float = 1.0
    lambda_sub: float = 1.0
    lambda_ins: float = 1.0
    jobs: int = 1
    seed: int | None = None
    skip_errors: bool = False
    spell_distance: int = 1
    lambda_max: float = DEFAULT_LAMBDA_MAX
    max_cycles: int = DEFAULT_MAX_CYCLES
    tol: float = DEFAULT_TOL


_BOOL_WORDS = {"1": True, "true": True, "yes": True, "on": True,
               "0": False, "false": False, "no": False, "off": False}


def _parse_scalar(key: str, value: str):
    if key in ("beam", "jobs", "seed", "spell_distance", "max_cycles"):
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key} expects an integer, got {value!r}")
    if key in ("lambda_del", "lambda_sub", "lambda_ins", "lambda_max", "tol"):
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{key} expects a number, got {value!r}")
    if key == "skip_errors":
        flag = _BOOL_WORDS.get(value.strip().lower())
        if flag is None:
            raise ConfigError(f"{key} expects a boolean, got {value!r}")
        return flag
    return value


def load_config_file(path) -> dict:
    """key=value lines; # starts a comment; lm and confusion may repeat."""
    out: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError(f"expected key=value, got {line!r}", lineno)
            key, _, value = line.partition("=")
            key = key.strip().lower().replace("-", "_")
            value = value.strip()
            if key not in {f.name for f in fields(RunConfig)}:
                raise ConfigError(f"unknown configuration key {key!r} "
                                  f"(line {lineno})")
            if key in _MULTI_PATH_KEYS:
                out.setdefault(key, []).append(value)
            else:
                out[key] = _parse_scalar(key, value)
    for key in _MULTI_PATH_KEYS:
        if key in out:
            out[key] = tuple(out[key])
    return out


def _validate_config(cfg: RunConfig) -> None:
    if cfg.beam < 1:
        raise ConfigError(f"beam must be >= 1, got {cfg.beam}")
    if cfg.jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {cfg.jobs}")
    for name in ("lambda_del", "lambda_sub", "lambda_ins"):
        value = getattr(cfg, name)
        if not value >= 0.0:
            raise ConfigError(f"{name} must be >= 0, got {value}")
    if cfg.spell_distance not in (1, 2):
        raise ConfigError(f"spell_distance must be 1 or 2, got "
                          f"{cfg.spell_distance}")
    if not cfg.lambda_max > 0.0:
        raise ConfigError(f"lambda_max must be positive, got {cfg.lambda_max}")
    if cfg.max_cycles < 1:
        raise ConfigError(f"max_cycles must be >= 1, got {cfg.max_cycles}")
    if not cfg.tol > 0.0:
        raise ConfigError(f"tol must be positive, got {cfg.tol}")
    for path in _config_paths(cfg):
        with open(path, "r", encoding="utf-8"):
            pass


def _config_paths(cfg: RunConfig) -> list[str]:
    paths = [getattr(cfg, key) for key in _PATH_KEYS if getattr(cfg, key)]
    for key in _MULTI_PATH_KEYS:
        paths.extend(getattr(cfg, key))
    return paths


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    config_path = getattr(args, "config", None)
    if config_path:
        cfg = replace(cfg, **load_config_file(config_path))
    overrides = {}
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is None:
            continue
        if f.name in _MULTI_PATH_KEYS:
            value = tuple(value)
        overrides[f.name] = value
    if overrides:
        cfg = replace(cfg, **overrides)
    _validate_config(cfg)
    return cfg


def _read_lines(path) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def build_resources(cfg: RunConfig, input_words: Sequence[str]) -> CascadeResources:
    """Assemble cascade inputs from config paths, with built-in fallbacks.

    With a lexicon configured, spelling candidates for the off-lexicon
    input words are merged into the confusion catalog.
    """
    deletions = (load_token_list(cfg.deletions) if cfg.deletions
                 else list(DEFAULT_DELETABLE_TOKENS))
    insertions = (load_token_list(cfg.insertions) if cfg.insertions
                  else list(DEFAULT_INSERTABLE_TOKENS))
    catalogs = [load_confusion_tsv(path) for path in cfg.confusion]
    if cfg.lexicon:
        lexicon = load_lexicon(cfg.lexicon)
        words = sorted(set(input_words))
        catalogs.append(spell_candidates_catalog(
            words, lexicon, max_distance=cfg.spell_distance))
    catalog = merge_catalogs(catalogs) if catalogs else ConfusionCatalog()
    bpe = load_merges(cfg.bpe) if cfg.bpe else BpeModel(())
    penalties = PenaltyVector(cfg.lambda_del, cfg.lambda_sub, cfg.lambda_ins)
    return CascadeResources(tuple(deletions), tuple(insertions), catalog,
                            bpe, penalties)


def build_scorer(cfg: RunConfig) -> LmScorer:
    if not cfg.lm:
        return UniformLm()
    members = tuple(load_arpa(path) for path in cfg.lm)
    if len(members) == 1:
        return members[0]
    return LmEnsemble(members)


def cmd_learn_bpe(args: argparse.Namespace) -> int:
    if args.merges < 0:
        raise ConfigError(f"merge count must be >= 0, got {args.merges}")
    sentences = [line.split() for line in _read_lines(args.corpus)]
    model = learn_bpe(count_word_freqs(sentences), args.merges)
    save_merges(model, args.out)
    return EXIT_OK


def cmd_train_lm(args: argparse.Namespace) -> int:
    sentences = [line.split() for line in _read_lines(args.corpus)]
    if args.bpe:
        model = load_merges(args.bpe)
        sentences = [apply_bpe_sentence(s, model) for s in sentences]
    lm = train_ngram_lm([s for s in sentences if s], args.order)
    save_arpa(lm, args.out)
    return EXIT_OK


def cmd_correct(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    lines = _read_lines(args.input)
    sentences = [line.split() for line in lines]
    all_words = [w for sent in sentences for w in sent]
    res = build_resources(cfg, all_words)
    scorer = build_scorer(cfg)
    warnings: list[str] = []
    corrected = correct_corpus(sentences, res, scorer, cfg.beam,
                               jobs=cfg.jobs, skip_errors=cfg.skip_errors,
                               warnings=warnings)
    for note in warnings:
        print(f"fstgec: warning: {note}", file=sys.stderr)
    for tokens in corrected:
        print(" ".join(tokens))
    return EXIT_OK


def cmd_tune(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    dev = parse_m2("\n".join(_read_lines(args.dev)))
    if not dev:
        raise ConfigError("dev set contains no sentences")
    all_words = [w for rec in dev for w in rec.source]
    res = build_resources(cfg, all_words)
    scorer = build_scorer(cfg)
    init = PenaltyVector(cfg.lambda_del, cfg.lambda_sub, cfg.lambda_ins)

    def report(cycle: int, f: float, _pens: PenaltyVector) -> None:
        print(f"cycle {cycle + 1}: F0.5 {f:.4f}")

    result = powell_tune(dev, res, scorer, cfg.beam, init,
                         lambda_max=cfg.lambda_max, max_cycles=cfg.max_cycles,
                         tol=cfg.tol, jobs=cfg.jobs, on_cycle=report)
    pens = result.penalties
    print(f"tuned lambda_del {pens.lambda_del!r} "
          f"lambda_sub {pens.lambda_sub!r} lambda_ins {pens.lambda_ins!r}")
    print(f"final F0.5 {result.f_half:.4f}")
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    hypotheses = _read_lines(args.hyp)
    gold = parse_m2("\n".join(_read_lines(args.m2)))
    if len(hypotheses) != len(gold):
        raise ConfigError(f"{len(hypotheses)} hypothesis lines for "
                          f"{len(gold)} annotated sentences")
    print(score_corpus(hypotheses, gold).line())
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    records = parse_m2("\n".join(_read_lines(args.m2)))
    profile = count_edit_types(records)
    print(f"sentences {profile.sentences}")
    print(f"words {profile.words}")
    print(f"{'kind':<12} {'count':>7} {'per-sent':>9} {'per-word':>9}")
    for name, count, per_sent, per_word in profile.rows():
        print(f"{name:<12} {count:>7d} {per_sent:>9.2f} "
              f"{per_word * 100:>8.2f}%")
    return EXIT_OK


def cmd_prep_data(args: argparse.Namespace) -> int:
    real = []
    for path in args.real:
        real.extend(read_corpus_tsv(path))
    synth = []
    for path in args.synth or ():
        synth.extend(read_corpus_tsv(path))
    identity_tags = tuple(t for t in (args.identity_tags or "").split(",") if t)
    assembled = assemble_training_set(
        real, synth,
        identity_tags=identity_tags,
        oversample_tag=args.oversample_tag,
        oversample_rate=args.oversample_rate,
        real_rate=args.real_rate,
        shuffle=args.shuffle,
        seed=args.seed)
    write_corpus_tsv(assembled, args.out)
    n_real = len(assembled) - len(synth)
    ratio = real_synth_ratio(n_real, len(synth)) if n_real and synth else "-"
    print(f"real {n_real} synth {len(synth)} total {len(assembled)} "
          f"ratio {ratio}")
    return EXIT_OK


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE",
                        help="key=value settings file")
    parser.add_argument("--beam", type=int, metavar="N")
    parser.add_argument("--lambda-del", type=float, dest="lambda_del",
                        metavar="W")
    parser.add_argument("--lambda-sub", type=float, dest="lambda_sub",
                        metavar="W")
    parser.add_argument("--lambda-ins", type=float, dest="lambda_ins",
                        metavar="W")
    parser.add_argument("--lm", action="append", metavar="FILE",
                        help="ARPA model; repeat to build an ensemble")
    parser.add_argument("--jobs", type=int, metavar="N")
    parser.add_argument("--seed", type=int, metavar="N")
    parser.add_argument("--skip-errors", dest="skip_errors",
                        action="store_const", const=True)


def _add_resource_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--deletions", metavar="FILE",
                        help="deletable tokens, one per line")
    parser.add_argument("--insertions", metavar="FILE",
                        help="insertable tokens, one per line")
    parser.add_argument("--confusion", action="append", metavar="FILE",
                        help="word<TAB>candidate table; repeatable")
    parser.add_argument("--lexicon", metavar="FILE",
                        help="known words for spelling candidates")
    parser.add_argument("--bpe", metavar="FILE", help="learned merge table")
    parser.add_argument("--spell-distance", type=int, dest="spell_distance",
                        metavar="N", help="1 or 2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fstgec",
        description="Grammatical error correction with weighted "
                    "transducer hypothesis spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn-bpe", help="learn a subword merge table")
    p.add_argument("corpus", help="tokenized text, one sentence per line")
    p.add_argument("out", help="merge table destination")
    p.add_argument("--merges", type=int, default=DEFAULT_NUM_MERGES,
                   metavar="N")
    p.set_defaults(func=cmd_learn_bpe)

    p = sub.add_parser("train-lm", help="train a smoothed n-gram model")
    p.add_argument("corpus", help="tokenized text, one sentence per line")
    p.add_argument("out", help="ARPA destination")
    p.add_argument("--order", type=int, default=3, metavar="N")
    p.add_argument("--bpe", metavar="FILE",
                   help="segment the corpus with this merge table first")
    p.set_defaults(func=cmd_train_lm)

    p = sub.add_parser("correct", help="correct sentences to standard output")
    p.add_argument("input", help="tokenized text, one sentence per line")
    _add_common_flags(p)
    _add_resource_flags(p)
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("tune", help="fit edit penalties against a dev set")
    p.add_argument("dev", help="annotated dev set in M2 format")
    _add_common_flags(p)
    _add_resource_flags(p)
    p.add_argument("--lambda-max", type=float, dest="lambda_max", metavar="W")
    p.add_argument("--max-cycles", type=int, dest="max_cycles", metavar="N")
    p.add_argument("--tol", type=float, metavar="X")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("score", help="span precision/recall/F0.5")
    p.add_argument("hyp", help="corrected text, one sentence per line")
    p.add_argument("m2", help="gold annotations in M2 format")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("stats", help="edit-kind profile of an M2 file")
    p.add_argument("m2", help="annotations in M2 format")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("prep-data", help="assemble a training corpus")
    p.add_argument("--real", action="append", required=True, metavar="FILE",
                   help="real pairs TSV; repeatable")
    p.add_argument("--synth", action="append", metavar="FILE",
                   help="synthetic pairs TSV; repeatable")
    p.add_argument("--out", required=True, metavar="FILE")
    p.add_argument("--identity-tags", dest="identity_tags", metavar="T[,T]",
                   help="tags whose identity pairs are dropped")
    p.add_argument("--oversample-tag", dest="oversample_tag", metavar="TAG")
    p.add_argument("--oversample-rate", dest="oversample_rate", type=int,
                   default=1, metavar="N")
    p.add_argument("--real-rate", dest="real_rate", type=int, default=1,
                   metavar="N")
    p.add_argument("--shuffle", action="store_true")
    p.add_argument("--seed", type=int, metavar="N")
    p.set_defaults(func=cmd_prep_data)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as e:
        print(f"fstgec: {e}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ParseError, StructuralError, ValueError) as e:
        print(f"fstgec: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as e:  # noqa: BLE001 - uniform exit-code contract
        print(f"fstgec: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
