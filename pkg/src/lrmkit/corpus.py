"""Corpus ingestion and the per-group analysis behind the report."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from os import PathLike
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from . import __version__
from .alignment import Kind, LLERecord, align_syllables, align_words
from .diagnostics import FATAL, WARNING, Diagnostic
from .errors import DuplicateSongId, LRMSyntaxError, MetricsError, NoFilesFound, UnsupportedDenominator
from .keywords import (
    EXTRACTORS,
    RAKE,
    YAKE,
    ExtractorParams,
    KeywordSet,
    Stoplist,
    bundled_stoplist,
    extract_song_keywords,
    jaccard,
    load_stoplist_file,
    mark_words,
)
from .lexicon import Lexicon, annotate_song, bundled_lexicon, load_lexicon_file
from .lrm_format import Song, lint_song, read_lrm_file
from .metrics import (
    COMPOSITION,
    DOWNBEAT_VS_REST,
    NM_MODES,
    PAPER_FORMULA,
    STRONG_VS_WEAK,
    accuracy,
    conditional_panel,
    confusion,
    distribution,
    display,
    lrm_score,
    nonstress_matching,
    ols_fit,
    regression_points,
    stress_matching,
)
from .score import check_song_meter

SCHEMA_VERSION = "1.0"
LEXICON_ENV = "LRMKIT_LEXICON"
ALL = "All"


@dataclass(frozen=True)
class CorpusSong:
    song_id: str
    path: str
    song: Song


@dataclass
class Corpus:
    songs: list[CorpusSong] = field(default_factory=list)
    diagnostics: dict[str, list[Diagnostic]] = field(default_factory=dict)
    excluded: list[str] = field(default_factory=list)

    @property
    def groups(self) -> dict[str, list[CorpusSong]]:
        out: dict[str, list[CorpusSong]] = {}
        for cs in self.songs:
            out.setdefault(str(cs.song.timesig), []).append(cs)
        return dict(sorted(out.items()))

    @property
    def fatal_count(self) -> int:
        return sum(d.fatal for diags in self.diagnostics.values() for d in diags)

    def all_diagnostics(self) -> list[Diagnostic]:
        return [d for sid in sorted(self.diagnostics) for d in self.diagnostics[sid]]


def _lrm_files(path: Path) -> list[Path]:
    if path.is_file():
        return [path]
    if not path.is_dir():
        raise NoFilesFound(f"{path} does not exist")
    return sorted(path.rglob("*.lrm"))


def ingest_corpus(path: Union[str, PathLike]) -> Corpus:
    """Parse every ``.lrm`` file under ``path``; files with fatal errors are excluded."""
    root = Path(path)
    files = _lrm_files(root)
    if not files:
        raise NoFilesFound(f"no .lrm files under {root}")
    corpus = Corpus()
    seen: dict[str, Path] = {}
    for f in files:
        sid = f.stem
        if sid in seen:
            raise DuplicateSongId(f"song id {sid!r} used by {seen[sid]} and {f}")
        seen[sid] = f
        try:
            song = read_lrm_file(f)
        except LRMSyntaxError as exc:
            corpus.diagnostics[sid] = [
                Diagnostic(type(exc).__name__, exc.message, FATAL, sid, exc.line, exc.column)
            ]
            corpus.excluded.append(sid)
            continue
        diags = lint_song(song, sid)
        try:
            diags += check_song_meter(song, sid)[2]
        except UnsupportedDenominator as exc:
            diags.append(Diagnostic("meter-unchecked", str(exc), WARNING, sid))
        corpus.diagnostics[sid] = diags
        corpus.songs.append(CorpusSong(sid, str(f), song))
    return corpus


@dataclass(frozen=True)
class RunConfig:
    lexicon_path: Optional[str] = None  # None: $LRMKIT_LEXICON, else the bundled subset
    stoplist_path: Optional[str] = None
    extractor: str = YAKE
    params: ExtractorParams = field(default_factory=ExtractorParams)
    nm_mode: str = PAPER_FORMULA
    word_beat_mode: str = "first"
    pronunciation_variant: str = "stressed"
    timesig_filter: str = "all"
    kind_filter: str = "all"
    output_format: str = "json"
    include_pickups: bool = True

    def __post_init__(self):
        if self.extractor not in EXTRACTORS:
            raise ValueError(f"extractor must be one of {EXTRACTORS}")
        if self.nm_mode not in NM_MODES:
            raise ValueError(f"nm_mode must be one of {NM_MODES}")
        if self.kind_filter not in ("all", "word", "syllable"):
            raise ValueError("kind_filter must be all, word or syllable")
        if self.output_format not in ("json", "csv", "table"):
            raise ValueError("output_format must be json, csv or table")

    def to_dict(self) -> dict:
        return asdict(self)

    def resolved_lexicon_path(self) -> Optional[str]:
        return self.lexicon_path or os.environ.get(LEXICON_ENV) or None


def load_resources(config: RunConfig) -> tuple[Lexicon, Stoplist]:
    lex_path = config.resolved_lexicon_path()
    lex = load_lexicon_file(lex_path) if lex_path else bundled_lexicon()
    stop = load_stoplist_file(config.stoplist_path) if config.stoplist_path else bundled_stoplist()
    return lex, stop


@dataclass
class SongAnalysis:
    song_id: str
    song: Song
    word_records: list[LLERecord]
    syllable_records: list[LLERecord]
    keywords: dict[str, KeywordSet]
    fallback_words: int
    mismatched_words: int
    diagnostics: list[Diagnostic]


def analyze_song(cs: CorpusSong, config: RunConfig, lex: Lexicon, stop: Stoplist,
                 keyword_flags: Optional[Sequence[bool]] = None) -> SongAnalysis:
    """Records for one song.  ``keyword_flags`` overrides the extractor (one flag per word)."""
    song = cs.song
    params = replace(config.params, stoplist_id=stop.id)
    keywords = {}
    if song.words:
        for name in EXTRACTORS:
            keywords[name] = extract_song_keywords(song, name, params, stop)
    if keyword_flags is not None:
        flags = list(keyword_flags)
    elif song.words:
        flags = [kw for _, kw in mark_words(song, keywords[config.extractor])]
    else:
        flags = []
    words = align_words(song, flags, cs.song_id, config.extractor if keyword_flags is None else "given",
                        config.word_beat_mode)
    syl = annotate_song(song, lex, config.pronunciation_variant, cs.song_id)
    syllables = align_syllables(song, syl.annotations, cs.song_id)
    if not config.include_pickups:
        words = [r for r in words if not r.pickup]
        syllables = [r for r in syllables if not r.pickup]
    return SongAnalysis(cs.song_id, song, words, syllables, keywords, syl.fallback_words, syl.mismatched_words,
                        syl.diagnostics)


def _num(value) -> Optional[float]:
    return None if value is None else float(value)


def _exact(value) -> Optional[str]:
    return None if value is None else str(value)


def _metric(fn, *args):
    try:
        return fn(*args), None
    except MetricsError as exc:
        return None, type(exc).__name__


def group_report(kind: str, timesig: str, records: Sequence[LLERecord], n_songs: int, nm_mode: str) -> dict:
    """Counts, metrics, distributions, conditional panel and regression for one group."""
    entry = {"kind": kind, "timesig": timesig, "songs": n_songs, "records": len(records)}
    c = confusion(records)
    cd = confusion(records, DOWNBEAT_VS_REST)
    entry["confusion"] = {STRONG_VS_WEAK: c.to_dict(), DOWNBEAT_VS_REST: cd.to_dict()}

    acc, acc_err = _metric(accuracy, c)
    sm, sm_err = _metric(stress_matching, c)
    nm, nm_err = _metric(nonstress_matching, c, nm_mode)
    other_mode = COMPOSITION if nm_mode == PAPER_FORMULA else PAPER_FORMULA
    nm_alt, nm_alt_err = _metric(nonstress_matching, c, other_mode)
    lrm = lrm_score(sm, nm) if sm is not None and nm is not None else None
    values = {"accuracy": acc, "sm": sm, "nm": nm, "lrm_score": lrm, f"nm_{other_mode}": nm_alt}
    errors = {"accuracy": acc_err, "sm": sm_err, "nm": nm_err, f"nm_{other_mode}": nm_alt_err}
    if lrm is None:
        errors["lrm_score"] = sm_err or nm_err
    entry["metrics"] = {k: _num(v) for k, v in values.items()}
    entry["exact"] = {k: _exact(v) for k, v in values.items()}
    entry["display"] = {k: display(v) for k, v in values.items()}
    entry["errors"] = {k: v for k, v in errors.items() if v}

    if records:
        dist = distribution(records)
        down = distribution(records, DOWNBEAT_VS_REST)
        entry["distribution"] = {
            "stressed": dist.stressed,
            "unstressed": dist.unstressed,
            "stressed_share": float(dist.stressed_share),
            "unstressed_share": float(dist.unstressed_share),
            "by_lle": _floats(dist.by_lle()),
            "by_beat": _floats(dist.by_beat()),
            "by_lle_downbeat": _floats(down.by_lle()),
            "by_beat_downbeat": _floats(down.by_beat()),
        }
    else:
        entry["distribution"] = None
    entry["conditional"] = _floats(conditional_panel(records))

    points = regression_points(records)
    fit, fit_err = _metric(ols_fit, [(x, y) for _, x, y in points])
    entry["regression"] = {
        "points": [{"song_id": sid, "weak_beats": x, "stressed_on_weak": y} for sid, x, y in points],
        "fit": fit.to_dict() if fit else None,
        "error": fit_err,
    }
    return entry


def _floats(tree):
    if isinstance(tree, dict):
        return {k: _floats(v) for k, v in tree.items()}
    if isinstance(tree, Fraction):
        return float(tree)
    return tree


@dataclass
class MetricsReport:
    metadata: dict
    groups: list[dict]
    songs: list[dict]
    summary: dict
    diagnostics: list[dict]

    def to_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "summary": self.summary,
            "groups": self.groups,
            "songs": self.songs,
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MetricsReport":
        return cls(data["metadata"], data["groups"], data["songs"], data["summary"], data["diagnostics"])

    def group(self, kind: str, timesig: str = ALL) -> dict:
        for g in self.groups:
            if g["kind"] == kind and g["timesig"] == timesig:
                return g
        raise KeyError((kind, timesig))


def _group_keys(corpus: Corpus, config: RunConfig) -> list[str]:
    if config.timesig_filter != "all":
        return [config.timesig_filter]
    observed = [ts for ts in corpus.groups if ts not in ("3/4", "4/4")]
    return [ALL, "3/4", "4/4", *observed]


def analyze(corpus: Corpus, config: RunConfig = RunConfig(), lexicon: Optional[Lexicon] = None,
            stoplist: Optional[Stoplist] = None,
            keyword_flags: Optional[Mapping[str, Sequence[bool]]] = None) -> MetricsReport:
    if not corpus.songs:
        raise NoFilesFound("corpus has no usable songs")
    if lexicon is None or stoplist is None:
        lex, stop = load_resources(config)
        lexicon = lexicon or lex
        stoplist = stoplist or stop
    keyword_flags = keyword_flags or {}
    analyses = [
        analyze_song(cs, config, lexicon, stoplist, keyword_flags.get(cs.song_id))
        for cs in sorted(corpus.songs, key=lambda cs: cs.song_id)
    ]
    kinds = [k for k in (Kind.WORD.value, Kind.SYLLABLE.value) if config.kind_filter in ("all", k)]
    groups = []
    for kind in kinds:
        for ts in _group_keys(corpus, config):
            members = [a for a in analyses if ts == ALL or str(a.song.timesig) == ts]
            records = [r for a in members for r in (a.word_records if kind == "word" else a.syllable_records)]
            groups.append(group_report(kind, ts, records, len(members), config.nm_mode))

    songs = []
    for a in analyses:
        kws = a.keywords
        n_kw = sum(r.stressed for r in a.word_records)
        songs.append({
            "song_id": a.song_id,
            "title": a.song.title,
            "timesig": str(a.song.timesig),
            "words": len(a.word_records),
            "syllables": len(a.syllable_records),
            "keywords": n_kw,
            "selected": {name: sorted(ks.selected) for name, ks in kws.items()},
            "rake_yake_jaccard": jaccard(kws[RAKE].selected, kws[YAKE].selected) if kws else None,
            "fallback_words": a.fallback_words,
            "syllable_mismatches": a.mismatched_words,
        })

    word_total = sum(len(a.word_records) for a in analyses)
    syl_total = sum(len(a.syllable_records) for a in analyses)
    kw_total = sum(s["keywords"] for s in songs)
    ss_total = sum(r.stressed for a in analyses for r in a.syllable_records)
    n_words = sum(len(a.song.words) for a in analyses)
    summary = {
        "songs": len(analyses),
        "excluded": sorted(corpus.excluded),
        "words": word_total,
        "syllables": syl_total,
        "keyword_proportion": kw_total / word_total if word_total else None,
        "stressed_syllable_proportion": ss_total / syl_total if syl_total else None,
        "oov_rate": sum(a.fallback_words for a in analyses) / n_words if n_words else None,
        "syllable_mismatch_words": sum(a.mismatched_words for a in analyses),
    }
    metadata = {
        "tool": "lrmkit",
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "lexicon_version": lexicon.version,
        "stoplist_id": stoplist.id,
        "extractor": config.extractor,
        "nm_mode": config.nm_mode,
        "keyword_source": "given" if keyword_flags else config.extractor,
    }
    diagnostics = [d.to_dict() for d in corpus.all_diagnostics()]
    diagnostics += [d.to_dict() for a in analyses for d in a.diagnostics]
    return MetricsReport(metadata, groups, songs, summary, diagnostics)


def corpus_records(corpus: Corpus, config: RunConfig = RunConfig(), lexicon: Optional[Lexicon] = None,
                   stoplist: Optional[Stoplist] = None) -> list[LLERecord]:
    if lexicon is None or stoplist is None:
        lexicon, stoplist = load_resources(config)
    out = []
    for cs in sorted(corpus.songs, key=lambda cs: cs.song_id):
        a = analyze_song(cs, config, lexicon, stoplist)
        out += a.word_records + a.syllable_records
    return out
