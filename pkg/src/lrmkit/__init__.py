"""Lyrics-rhythm matching analysis for songs in the LRM text format."""

__version__ = "0.1.0"

from .alignment import Kind, LLERecord, align_syllables, align_words  # noqa: E402
from .corpus import Corpus, MetricsReport, RunConfig, analyze, ingest_corpus  # noqa: E402
from .keywords import ExtractorParams, KeywordSet, rake_extract, yake_extract  # noqa: E402
from .lexicon import Lexicon, bundled_lexicon, load_lexicon, syllabify  # noqa: E402
from .lrm_format import Song, parse_lrm, read_lrm_file, serialize_lrm  # noqa: E402
from .metrics import ConfusionCounts, accuracy, confusion, lrm_score, nonstress_matching, stress_matching  # noqa: E402
from .report import emit  # noqa: E402
from .score import derive_score, validate_meter  # noqa: E402

__all__ = [
    "__version__", "Kind", "LLERecord", "align_syllables", "align_words", "Corpus", "MetricsReport", "RunConfig",
    "analyze", "ingest_corpus", "ExtractorParams", "KeywordSet", "rake_extract", "yake_extract", "Lexicon",
    "bundled_lexicon", "load_lexicon", "syllabify", "Song", "parse_lrm", "read_lrm_file", "serialize_lrm",
    "ConfusionCounts", "accuracy", "confusion", "lrm_score", "nonstress_matching", "stress_matching", "emit",
    "derive_score", "validate_meter",
]
