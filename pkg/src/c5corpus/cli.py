"""`c5` command line: the pipeline stages as composable subcommands.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 validator
failure.
"""

import argparse
import json
import sys
from pathlib import Path

from . import pipeline, vocab as vocab_mod
from .clean import CleanConfig
from .corpus import (
    DEFAULT_MAX_FILE_BYTES,
    SplitConfig,
    compute_stats,
    emit_pretraining,
    emit_splits,
)
from .errors import C5Error, ValidationError
from .records import read_record_file
from .report import save_report
from .segment import SegmentConfig, load_badwords, strict_segment_config
from .validate import check_corpus_format, check_deduped, check_segmented

USAGE_EXIT = 1
DATA_EXIT = 2
VALIDATION_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _parse_ratios(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("ratios must look like 99:0.5:0.5")
    try:
        r = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("ratios must be numbers")
    if any(x < 0 for x in r) or sum(r) <= 0:
        raise argparse.ArgumentTypeError("ratios must be non-negative, sum > 0")
    return r


def _segment_config(args) -> SegmentConfig:
    badwords = load_badwords(args.badwords) if args.badwords else None
    if args.strict_paper_mode:
        return strict_segment_config(badwords, args.min_len)
    return SegmentConfig(badwords=badwords, min_sentence_len=args.min_len)


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=1, metavar="N")
    common.add_argument("--seed", type=int, default=0, metavar="N")
    common.add_argument(
        "--strict-paper-mode",
        action="store_true",
        help="narrowest filter readings: Javascript/JavaScript casings only, "
        "'{' as the only curly bracket, terminal marks limited to 。？”",
    )
    common.add_argument("--manifest", metavar="PATH", default=None)

    parser = _Parser(prog="c5", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="parse WET archives into records")
    p.add_argument("--input", nargs="+", required=True, metavar="PATH")
    p.add_argument("--output", required=True, metavar="RECORDS")
    p.add_argument("--gzip", choices=("auto", "on", "off"), default="auto")

    p = sub.add_parser("clean", parents=[common], help="language gate, blanks, Javascript lines")
    p.add_argument("--input", required=True, metavar="RECORDS")
    p.add_argument("--output", required=True, metavar="RECORDS")
    p.add_argument("--report", required=True, metavar="PATH")
    p.add_argument("--min-chinese-ratio", type=float, default=0.5, metavar="F")
    p.add_argument("--js-literal", action="store_true",
                   help="match only the Javascript/JavaScript casings")
    p.add_argument("--no-trust-metadata", action="store_true",
                   help="always decide by content ratio, ignoring declared languages")

    p = sub.add_parser("segment", parents=[common], help="split into sentences and filter")
    p.add_argument("--input", required=True, metavar="RECORDS")
    p.add_argument("--output", required=True, metavar="RECORDS")
    p.add_argument("--badwords", required=True, metavar="PATH")
    p.add_argument("--min-len", type=int, default=5, metavar="N")
    p.add_argument("--report", default=None, metavar="PATH")

    p = sub.add_parser("dedup", parents=[common], help="drop repeated four-sentence windows")
    p.add_argument("--input", required=True, metavar="RECORDS")
    p.add_argument("--output", required=True, metavar="RECORDS")
    p.add_argument("--state", required=True, metavar="PATH")
    p.add_argument("--shards", type=int, default=16, metavar="N")
    p.add_argument("--two-pass", action="store_true")
    p.add_argument("--resume", action="store_true",
                   help="preload the digest set from an existing state file")
    p.add_argument("--report", default=None, metavar="PATH")

    p = sub.add_parser("split", parents=[common], help="assign splits and emit text")
    p.add_argument("--input", required=True, metavar="RECORDS")
    p.add_argument("--ratios", type=_parse_ratios, default=(99.0, 0.5, 0.5), metavar="A:B:C")
    p.add_argument("--out-dir", required=True, metavar="DIR")
    p.add_argument("--max-file-bytes", type=int, default=DEFAULT_MAX_FILE_BYTES, metavar="N")

    p = sub.add_parser("emit", parents=[common], help="emit one pre-training text file")
    p.add_argument("--input", required=True, metavar="RECORDS")
    p.add_argument("--output", required=True, metavar="PATH")

    p = sub.add_parser("stats", parents=[common], help="report corpus statistics")
    p.add_argument("--input", required=True, metavar="DIR|FILE")
    p.add_argument("--vocab", default=None, metavar="PATH")

    pv = sub.add_parser("vocab", parents=[common], help="vocabulary tools")
    vsub = pv.add_subparsers(dest="vocab_command", required=True)

    p = vsub.add_parser("categorize", parents=[common])
    p.add_argument("--vocab", required=True, metavar="PATH")
    p.add_argument("--report", required=True, metavar="PATH")

    p = vsub.add_parser("prune", parents=[common])
    p.add_argument("--vocab", required=True, metavar="PATH")
    p.add_argument("--output", required=True, metavar="PATH")
    p.add_argument("--year-min", type=int, default=1800, metavar="N")
    p.add_argument("--year-max", type=int, default=2030, metavar="N")

    p = vsub.add_parser("tokenize", parents=[common])
    p.add_argument("--vocab", required=True, metavar="PATH")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", default=None, metavar="S")
    group.add_argument("--stdin", action="store_true")

    p = sub.add_parser("run", parents=[common], help="full pipeline with manifest")
    p.add_argument("--input", nargs="+", required=True, metavar="PATH")
    p.add_argument("--out-dir", required=True, metavar="DIR")
    p.add_argument("--badwords", required=True, metavar="PATH")
    p.add_argument("--gzip", choices=("auto", "on", "off"), default="auto")
    p.add_argument("--ratios", type=_parse_ratios, default=(99.0, 0.5, 0.5), metavar="A:B:C")
    p.add_argument("--min-chinese-ratio", type=float, default=0.5, metavar="F")
    p.add_argument("--min-len", type=int, default=5, metavar="N")
    p.add_argument("--shards", type=int, default=16, metavar="N")
    p.add_argument("--two-pass", action="store_true")
    p.add_argument("--max-file-bytes", type=int, default=DEFAULT_MAX_FILE_BYTES, metavar="N")

    p = sub.add_parser("validate", parents=[common], help="check stage artifacts")
    p.add_argument("--segmented", default=None, metavar="RECORDS")
    p.add_argument("--deduped", default=None, metavar="RECORDS")
    p.add_argument("--corpus", default=None, metavar="DIR|FILE")
    p.add_argument("--badwords", default=None, metavar="PATH")
    p.add_argument("--min-len", type=int, default=5, metavar="N")

    return parser


def _cmd_ingest(args) -> int:
    counters = pipeline.stage_ingest(args.input, args.output, args.gzip)
    print(
        f"ingest: {counters.emitted} records, {counters.skipped} skipped, "
        f"{counters.non_conversion} non-conversion",
        file=sys.stderr,
    )
    return 0


def _cmd_clean(args) -> int:
    cfg = CleanConfig(
        min_chinese_ratio=args.min_chinese_ratio,
        language_metadata_trusted=not args.no_trust_metadata,
        javascript_case_insensitive=not (args.js_literal or args.strict_paper_mode),
    )
    report = pipeline.stage_clean(args.input, args.output, cfg, args.workers)
    save_report(report, args.report)
    return 0


def _cmd_segment(args) -> int:
    cfg = _segment_config(args)
    report = pipeline.stage_segment(args.input, args.output, cfg, args.workers)
    if args.report:
        save_report(report, args.report)
    return 0


def _cmd_dedup(args) -> int:
    state, report = pipeline.stage_dedup(
        args.input,
        args.output,
        args.state,
        resume=args.resume,
        two_pass=args.two_pass,
        shards=args.shards,
    )
    if args.report:
        save_report(report, args.report)
    print(
        f"dedup: {state.spans_seen} windows seen, {state.spans_removed} removed",
        file=sys.stderr,
    )
    return 0


def _cmd_split(args) -> int:
    cfg = SplitConfig(ratios=args.ratios, seed=args.seed)
    stats = emit_splits(
        read_record_file(args.input), args.out_dir, cfg, args.max_file_bytes
    )
    for name in ("train", "dev", "test"):
        print(f"{name}: {json.dumps(stats[name].as_dict())}", file=sys.stderr)
    return 0


def _cmd_emit(args) -> int:
    with open(args.output, "wb") as fp:
        stats = emit_pretraining(read_record_file(args.input), fp)
    print(f"emit: {json.dumps(stats.as_dict())}", file=sys.stderr)
    return 0


def _print_stats_table(rows) -> None:
    print(f"{'Dataset':<10}{'Token (B)':>12}{'Sentences (M)':>16}{'Size (GB)':>12}")
    for name, stats in rows:
        print(
            f"{name:<10}{stats.token_count / 1e9:>12.4f}"
            f"{stats.sentence_count / 1e6:>16.4f}"
            f"{stats.byte_size / 1e9:>12.4f}"
        )
    print()
    for name, stats in rows:
        print(f"{name}: {json.dumps(stats.as_dict())}")


def _cmd_stats(args) -> int:
    tokenizer = None
    if args.vocab:
        vocabulary = vocab_mod.load_vocab(args.vocab)
        tokenizer = lambda line: vocab_mod.tokenize(line, vocabulary)
    root = Path(args.input)
    rows = []
    if root.is_dir() and any((root / name).is_dir() for name in ("train", "dev", "test")):
        for name in ("train", "dev", "test"):
            if (root / name).is_dir():
                rows.append((name, compute_stats(root / name, tokenizer)))
    else:
        rows.append((root.name or str(root), compute_stats(root, tokenizer)))
    _print_stats_table(rows)
    return 0


def _cmd_vocab(args) -> int:
    if args.vocab_command == "categorize":
        vocabulary = vocab_mod.load_vocab(args.vocab)
        counts = vocabulary.category_counts()
        with open(args.report, "w", encoding="utf-8") as fp:
            for cat in vocab_mod.CATEGORIES:
                fp.write(f"{cat}\t{counts[cat]}\n")
            fp.write(f"Total\t{len(vocabulary)}\n")
        for cat in vocab_mod.CATEGORIES:
            print(f"{cat}\t{counts[cat]}")
        print(f"Total\t{len(vocabulary)}")
        return 0
    if args.vocab_command == "prune":
        vocabulary = vocab_mod.load_vocab(args.vocab)
        rules = vocab_mod.PruneRules(year_min=args.year_min, year_max=args.year_max)
        pruned, tally = vocab_mod.prune(vocabulary, rules)
        vocab_mod.save_vocab(pruned, args.output)
        for cat in vocab_mod.CATEGORIES:
            print(f"{cat}\tkept={tally[cat]['kept']}\tremoved={tally[cat]['removed']}")
        print(f"Total\t{len(vocabulary)} -> {len(pruned)}")
        return 0
    if args.vocab_command == "tokenize":
        vocabulary = vocab_mod.load_vocab(args.vocab)
        lines = [args.text] if args.text is not None else sys.stdin.read().splitlines()
        for line in lines:
            ids = vocab_mod.tokenize(line, vocabulary)
            print(" ".join(str(i) for i in ids))
        return 0
    raise AssertionError(args.vocab_command)


def _cmd_run(args) -> int:
    cfg = pipeline.PipelineConfig(
        inputs=list(args.input),
        out_dir=args.out_dir,
        badwords_path=args.badwords,
        gzip_mode=args.gzip,
        min_chinese_ratio=args.min_chinese_ratio,
        min_sentence_len=args.min_len,
        strict_paper_mode=args.strict_paper_mode,
        ratios=args.ratios,
        seed=args.seed,
        workers=args.workers,
        dedup_shards=args.shards,
        dedup_two_pass=args.two_pass,
        max_file_bytes=args.max_file_bytes,
        manifest_path=args.manifest,
    )
    report, stats, _manifest = pipeline.run_pipeline(cfg)
    for name, counter in report.as_dict().items():
        print(f"{name}\t{counter}", file=sys.stderr)
    _print_stats_table([(name, stats[name]) for name in ("train", "dev", "test")])
    return 0


def _cmd_validate(args) -> int:
    if not (args.segmented or args.deduped or args.corpus):
        raise C5Error("nothing to validate: pass --segmented, --deduped or --corpus")
    problems = []
    if args.segmented:
        badwords = load_badwords(args.badwords) if args.badwords else frozenset()
        if args.strict_paper_mode:
            cfg = strict_segment_config(badwords, args.min_len)
        else:
            cfg = SegmentConfig(badwords=badwords, min_sentence_len=args.min_len)
        problems += check_segmented(read_record_file(args.segmented), cfg)
    if args.deduped:
        problems += check_deduped(read_record_file(args.deduped))
    if args.corpus:
        problems += check_corpus_format(args.corpus)
    if problems:
        for problem in problems[:50]:
            print(f"violation: {problem}", file=sys.stderr)
        return VALIDATION_EXIT
    print("validate: ok", file=sys.stderr)
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "clean": _cmd_clean,
    "segment": _cmd_segment,
    "dedup": _cmd_dedup,
    "split": _cmd_split,
    "emit": _cmd_emit,
    "stats": _cmd_stats,
    "vocab": _cmd_vocab,
    "run": _cmd_run,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"c5: validation failed: {exc}", file=sys.stderr)
        return VALIDATION_EXIT
    except C5Error as exc:
        print(f"c5: error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"c5: error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
