"""``lrmkit`` command line: validate, inspect and analyze LRM song files.

Exit codes: 0 success, 1 fatal diagnostics or data errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .alignment import RECORD_FIELDS
from .corpus import RunConfig, analyze, corpus_records, ingest_corpus, load_resources
from .errors import LRMError, LRMSyntaxError, NoFilesFound
from .keywords import EXTRACTORS, SELECTIONS, ExtractorParams, extract_song_keywords, mark_words
from .lexicon import annotate_song
from .lrm_format import read_lrm_file
from .metrics import NM_MODES
from .report import FORMATS, emit, rows_to_csv
from .score import check_song_meter, format_score_table, score_records

EXIT_OK, EXIT_FATAL, EXIT_USAGE = 0, 1, 2

# config-file key -> (RunConfig field or "params.<field>", converter)
_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}
CONFIG_KEYS = {
    "lexicon": ("lexicon_path", str),
    "stoplist": ("stoplist_path", str),
    "extractor": ("extractor", str),
    "max_ngram": ("params.max_ngram", int),
    "selection": ("params.selection", str),
    "value": ("params.value", float),
    "dedup_threshold": ("params.dedup_threshold", float),
    "window": ("params.window", int),
    "nm_mode": ("nm_mode", str),
    "word_beat": ("word_beat_mode", str),
    "variant": ("pronunciation_variant", str),
    "timesig": ("timesig_filter", str),
    "kind": ("kind_filter", str),
    "format": ("output_format", str),
    "include_pickups": ("include_pickups", lambda s: _BOOL[s.strip().lower()]),
}


class UsageError(Exception):
    pass


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment; unknown keys are rejected."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: expected one of {', '.join(CONFIG_KEYS)} as 'key = value'")
        values[key] = value.strip()
    return values


def build_config(cli: dict, file_values: Optional[dict] = None) -> RunConfig:
    """CLI values (None = unset) override config-file values, which override defaults."""
    merged: dict[str, object] = {}
    for key, raw in (file_values or {}).items():
        target, convert = CONFIG_KEYS[key]
        try:
            merged[target] = convert(raw)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad value {raw!r} for {key}") from exc
    for key, value in cli.items():
        if value is not None and key in CONFIG_KEYS:
            merged[CONFIG_KEYS[key][0]] = value
    params = {k.split(".", 1)[1]: v for k, v in merged.items() if k.startswith("params.")}
    top = {k: v for k, v in merged.items() if not k.startswith("params.")}
    try:
        return RunConfig(params=ExtractorParams(**params), **top)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


# -- argument parsing ----------------------------------------------------------


def _add_resource_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lexicon", help="CMU-format pronouncing dictionary (default: $LRMKIT_LEXICON or bundled subset)")
    p.add_argument("--stoplist", help="stopword list, one word per line")
    p.add_argument("--variant", choices=("stressed", "first"), help="pronunciation variant policy")


def _add_extractor_opts(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--extractor", choices=EXTRACTORS, required=required)
    p.add_argument("--max-ngram", dest="max_ngram", type=int)
    p.add_argument("--selection", choices=SELECTIONS)
    p.add_argument("--value", type=float, help="k, score threshold, or proportion, depending on --selection")
    p.add_argument("--dedup-threshold", dest="dedup_threshold", type=float)
    p.add_argument("--window", type=int)


def _add_run_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    _add_resource_opts(p)
    _add_extractor_opts(p)
    p.add_argument("--nm-mode", dest="nm_mode", choices=NM_MODES)
    p.add_argument("--word-beat", dest="word_beat", choices=("first", "any_strong"))
    p.add_argument("--timesig", help="restrict to one time signature, e.g. 3/4")
    p.add_argument("--kind", choices=("all", "word", "syllable"))
    p.add_argument("--pickups", dest="include_pickups", action=argparse.BooleanOptionalAction, default=None,
                   help="include pickup-measure records (default: yes)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrmkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and meter-check .lrm files")
    p.add_argument("path")

    p = sub.add_parser("score", help="print the derived score table of one song")
    p.add_argument("file")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")

    p = sub.add_parser("syllables", help="per-word syllables, stress and beats")
    p.add_argument("file")
    _add_resource_opts(p)

    p = sub.add_parser("keywords", help="rank keyword candidates for one song")
    p.add_argument("file")
    _add_extractor_opts(p, required=True)
    p.add_argument("--stoplist")

    p = sub.add_parser("analyze", help="corpus metrics report")
    p.add_argument("path")
    _add_run_opts(p)
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("-o", "--output", help="output file (json, table) or directory (csv); default stdout")

    p = sub.add_parser("export-records", help="write every LLE record as CSV")
    p.add_argument("path")
    _add_run_opts(p)
    p.add_argument("-o", "--output", help="output CSV file; default stdout")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    cli = {key: getattr(args, key, None) for key in CONFIG_KEYS}
    cli["timesig"] = getattr(args, "timesig", None)
    return build_config(cli, file_values)


# -- commands ------------------------------------------------------------------


def cmd_validate(args, out) -> int:
    corpus = ingest_corpus(args.path)
    diags = corpus.all_diagnostics()
    for d in diags:
        print(d, file=out)
    n_files = len(corpus.songs) + len(corpus.excluded)
    warnings = sum(d.severity == "warning" for d in diags)
    print(f"{n_files} file(s): {corpus.fatal_count} fatal, {warnings} warning(s), "
          f"{len(corpus.excluded)} excluded", file=out)
    return EXIT_FATAL if corpus.fatal_count else EXIT_OK


def cmd_score(args, out) -> int:
    song = read_lrm_file(args.file)
    events, measures, diags = check_song_meter(song, Path(args.file).stem)
    for d in diags:
        print(d, file=sys.stderr)
    if args.format == "table":
        out.write(format_score_table(measures))
    elif args.format == "json":
        out.write(json.dumps(score_records(events), indent=2) + "\n")
    else:
        records = score_records(events)
        header = list(records[0]) if records else []
        out.write(rows_to_csv([header] + [[r[h] for h in header] for r in records]))
    return EXIT_OK


def cmd_syllables(args, out) -> int:
    song = read_lrm_file(args.file)
    config = build_config({"lexicon": args.lexicon, "stoplist": args.stoplist, "variant": args.variant})
    lex, _ = load_resources(config)
    result = annotate_song(song, lex, config.pronunciation_variant, Path(args.file).stem)
    print("word\tsyllables\tstress\tbeats\tsource", file=out)
    for entry, ann in zip(song.words, result.annotations):
        frags = "-".join(frag for frag, _ in ann.syllables)
        stress = " ".join("1" if s else "0" for s in ann.stresses)
        beats = " ".join(str(g.beat) for g in entry.groups)
        print(f"{entry.text}\t{frags}\t{stress}\t{beats}\t{ann.source}", file=out)
    for d in result.diagnostics:
        print(d, file=sys.stderr)
    return EXIT_OK


def cmd_keywords(args, out) -> int:
    song = read_lrm_file(args.file)
    config = build_config({key: getattr(args, key, None) for key in CONFIG_KEYS})
    _, stop = load_resources(config)
    params = replace(config.params, stoplist_id=stop.id)
    kws = extract_song_keywords(song, args.extractor, params, stop)
    print("rank\tscore\tcandidate", file=out)
    for rank, (cand, score) in enumerate(kws.scores.items(), 1):
        print(f"{rank}\t{score:.6g}\t{cand}", file=out)
    print("selected: " + " ".join(sorted(kws.selected)), file=out)
    marked = " ".join(f"[{w.text}]" if kw else w.text for w, kw in mark_words(song, kws))
    print("lyrics: " + marked, file=out)
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    config = _config_from_args(args)
    corpus = ingest_corpus(args.path)
    for d in corpus.all_diagnostics():
        if d.fatal:
            print(d, file=sys.stderr)
    report = analyze(corpus, config)
    destination = args.output if args.output else out
    if config.output_format == "csv" and not args.output:
        raise UsageError("csv output needs --output DIR")
    emit(report, config.output_format, destination)
    return EXIT_OK


def cmd_export_records(args, out) -> int:
    config = _config_from_args(args)
    corpus = ingest_corpus(args.path)
    records = corpus_records(corpus, config)
    if config.kind_filter != "all":
        records = [r for r in records if r.kind.value == config.kind_filter]
    if config.timesig_filter != "all":
        records = [r for r in records if str(r.timesig) == config.timesig_filter]
    rows = [list(RECORD_FIELDS)] + [[r.to_row()[f] for f in RECORD_FIELDS] for r in records]
    text = rows_to_csv(rows)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "score": cmd_score,
    "syllables": cmd_syllables,
    "keywords": cmd_keywords,
    "analyze": cmd_analyze,
    "export-records": cmd_export_records,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"lrmkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoFilesFound, FileNotFoundError, IsADirectoryError) as exc:
        print(f"lrmkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LRMSyntaxError as exc:
        print(f"{args.file if hasattr(args, 'file') else ''}: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except (LRMError, OSError) as exc:
        print(f"lrmkit: {exc}", file=sys.stderr)
        return EXIT_FATAL


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
