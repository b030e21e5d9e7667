"""Unsupervised keyword extraction (RAKE, YAKE) over one song's lyrics.

RAKE scores a word by degree/frequency in the co-occurrence graph of
stopword-delimited candidate phrases; a phrase scores the sum of its words
(higher is better).  YAKE combines five per-term statistics (casing, sentence
position, normalized frequency, context relatedness, sentence dispersion) into
a score where lower is better.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from os import PathLike
from pathlib import Path
from typing import Iterable, Optional, Union

from .errors import EmptyLyrics
from .lrm_format import Song, WordEntry
from .text import normalize_token, split_sentences

RAKE = "rake"
YAKE = "yake"
EXTRACTORS = (RAKE, YAKE)
SELECTIONS = ("top_k", "threshold", "proportion")
DEFAULT_STOPLIST_ID = "glasgow-318"


@dataclass(frozen=True)
class Stoplist:
    id: str
    words: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return word in self.words


def load_stoplist(lines: Iterable[str], stoplist_id: str) -> Stoplist:
    """One word per line; ``#`` starts a comment."""
    words = set()
    for line in lines:
        word = line.split("#", 1)[0].strip()
        if word:
            words.add(normalize_token(word) or word.casefold())
    return Stoplist(stoplist_id, frozenset(words))


def load_stoplist_file(path: Union[str, PathLike]) -> Stoplist:
    path = Path(path)
    return load_stoplist(path.read_text(encoding="utf-8").splitlines(), path.name)


def bundled_stoplist() -> Stoplist:
    text = resources.files("lrmkit").joinpath("data/stoplist_en.txt").read_text(encoding="utf-8")
    return load_stoplist(text.splitlines(), DEFAULT_STOPLIST_ID)


@dataclass(frozen=True)
class ExtractorParams:
    max_ngram: int = 1  # YAKE candidate length; RAKE always uses maximal phrases
    stoplist_id: str = DEFAULT_STOPLIST_ID
    selection: str = "proportion"
    value: float = 0.5  # k, score threshold, or proportion of distinct content words
    dedup_threshold: float = 0.9  # YAKE only; 1.0 disables
    window: int = 1  # YAKE co-occurrence window

    def __post_init__(self):
        if self.selection not in SELECTIONS:
            raise ValueError(f"selection must be one of {SELECTIONS}, got {self.selection!r}")
        if self.selection == "proportion" and not 0 < self.value <= 1:
            raise ValueError(f"proportion must lie in (0, 1], got {self.value}")
        if self.selection == "top_k" and (self.value < 0 or int(self.value) != self.value):
            raise ValueError(f"top_k must be a non-negative integer, got {self.value}")
        if self.max_ngram < 1 or self.window < 1:
            raise ValueError("max_ngram and window must be at least 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class KeywordSet:
    extractor: str
    scores: dict[str, float]  # candidate -> score, in rank order (best first)
    selected: frozenset[str]  # case-folded unigrams
    params: ExtractorParams = field(default_factory=ExtractorParams)

    @property
    def ranking(self) -> list[str]:
        return list(self.scores)


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def _select(ranked: list[tuple[str, float]], params: ExtractorParams, stop: Stoplist, n_distinct: int,
            lower_is_better: bool) -> frozenset[str]:
    selected: set[str] = set()

    def take(candidate: str) -> None:
        selected.update(w for w in candidate.split(" ") if w not in stop)

    if params.selection == "top_k":
        for candidate, _ in ranked[: int(params.value)]:
            take(candidate)
    elif params.selection == "threshold":
        for candidate, score in ranked:
            if (score <= params.value) if lower_is_better else (score >= params.value):
                take(candidate)
    else:
        target = _round_half_up(Fraction(str(params.value)) * n_distinct)
        for candidate, _ in ranked:
            if len(selected) >= target:
                break
            take(candidate)
    return frozenset(selected)


def _sentences(lyrics: str) -> list[list[list[str]]]:
    if not lyrics or not lyrics.strip():
        raise EmptyLyrics("lyrics are empty")
    sentences = split_sentences(lyrics)
    if not sentences:
        raise EmptyLyrics("lyrics contain no words")
    return sentences


def _distinct_content_words(sentences, stop: Stoplist) -> int:
    return len({normalize_token(t) for s in sentences for c in s for t in c} - stop.words)


# -- RAKE ----------------------------------------------------------------------


def rake_word_scores(lyrics: str, stoplist: Optional[Stoplist] = None) -> tuple[dict[str, float], list[tuple[str, ...]]]:
    """Word scores deg(w)/freq(w) and the candidate phrase occurrences they came from."""
    stop = stoplist or bundled_stoplist()
    phrases: list[tuple[str, ...]] = []
    for sentence in _sentences(lyrics):
        for chunk in sentence:
            run: list[str] = []
            for token in chunk:
                key = normalize_token(token)
                if key in stop:
                    if run:
                        phrases.append(tuple(run))
                    run = []
                else:
                    run.append(key)
            if run:
                phrases.append(tuple(run))
    freq: Counter[str] = Counter()
    degree: Counter[str] = Counter()
    for phrase in phrases:
        for word in phrase:
            freq[word] += 1
            degree[word] += len(phrase)
    return {w: degree[w] / freq[w] for w in sorted(freq)}, phrases


def rake_extract(lyrics: str, stoplist: Optional[Stoplist] = None,
                 params: ExtractorParams = ExtractorParams()) -> KeywordSet:
    stop = stoplist or bundled_stoplist()
    word_scores, phrases = rake_word_scores(lyrics, stop)
    scores = {" ".join(p): sum(word_scores[w] for w in p) for p in phrases}
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    n = _distinct_content_words(_sentences(lyrics), stop)
    selected = _select(ranked, params, stop, n, lower_is_better=False)
    return KeywordSet(RAKE, dict(ranked), selected, params)


# -- YAKE ----------------------------------------------------------------------


@dataclass
class TermStats:
    tf: int = 0
    tf_upper: int = 0  # capitalized, not sentence-initial
    tf_acronym: int = 0
    sentence_ids: set[int] = field(default_factory=set)
    left: Counter = field(default_factory=Counter)  # neighbor -> co-occurrences to the left
    right: Counter = field(default_factory=Counter)


@dataclass(frozen=True)
class TermFeatures:
    casing: float
    position: float
    frequency: float
    relatedness: float
    dispersion: float
    score: float


def yake_term_stats(sentences: list[list[list[str]]], window: int = 1) -> dict[str, TermStats]:
    stats: dict[str, TermStats] = defaultdict(TermStats)
    for sid, sentence in enumerate(sentences):
        first = True
        for chunk in sentence:
            keys = [normalize_token(t) for t in chunk]
            for i, (token, key) in enumerate(zip(chunk, keys)):
                st = stats[key]
                st.tf += 1
                st.sentence_ids.add(sid)
                if len(token) > 1 and token.isupper():
                    st.tf_acronym += 1
                elif token[0].isupper() and not first:
                    st.tf_upper += 1
                first = False
                for j in range(max(0, i - window), i):
                    st.left[keys[j]] += 1
                    stats[keys[j]].right[key] += 1
    return dict(stats)


def yake_term_features(stats: dict[str, TermStats], stop: Stoplist, n_sentences: int) -> dict[str, TermFeatures]:
    max_tf = max(s.tf for s in stats.values())
    content = [s.tf for k, s in stats.items() if k not in stop] or [s.tf for s in stats.values()]
    mean_tf = statistics.fmean(content)
    std_tf = statistics.pstdev(content)
    out = {}
    for key, st in stats.items():
        casing = max(st.tf_upper, st.tf_acronym) / (1 + math.log(st.tf))
        position = math.log(math.log(3 + statistics.median(sorted(st.sentence_ids))))
        frequency = st.tf / (mean_tf + std_tf)
        dl = len(st.left) / sum(st.left.values()) if st.left else 0.0
        dr = len(st.right) / sum(st.right.values()) if st.right else 0.0
        relatedness = 1 + (dl + dr) * st.tf / max_tf
        dispersion = len(st.sentence_ids) / n_sentences
        score = (relatedness * position) / (casing + frequency / relatedness + dispersion / relatedness)
        out[key] = TermFeatures(casing, position, frequency, relatedness, dispersion, score)
    return out


def _similarity(a: str, b: str) -> float:
    if a == b:
        return 1.0
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return 1 - prev[-1] / max(len(a), len(b))


def yake_extract(lyrics: str, params: ExtractorParams = ExtractorParams(),
                 stoplist: Optional[Stoplist] = None) -> KeywordSet:
    stop = stoplist or bundled_stoplist()
    sentences = _sentences(lyrics)
    stats = yake_term_stats(sentences, params.window)
    features = yake_term_features(stats, stop, len(sentences))

    counts: Counter[tuple[str, ...]] = Counter()
    for sentence in sentences:
        for chunk in sentence:
            keys = [normalize_token(t) for t in chunk]
            for n in range(1, params.max_ngram + 1):
                for i in range(len(keys) - n + 1):
                    gram = tuple(keys[i : i + n])
                    if gram[0] in stop or gram[-1] in stop:
                        continue
                    counts[gram] += 1

    scores = {}
    for gram, tf in counts.items():
        prod, total = 1.0, 0.0
        for i, key in enumerate(gram):
            if key not in stop:
                prod *= features[key].score
                total += features[key].score
                continue
            # inner stopword: weight by how strongly it binds its neighbors
            prev, nxt = gram[i - 1], gram[i + 1]
            p_prev = stats[prev].right[key] / stats[prev].tf
            p_next = stats[key].right[nxt] / stats[nxt].tf
            miss = 1 - p_prev * p_next
            prod *= 1 + miss
            total -= miss
        scores[" ".join(gram)] = prod / (tf * (1 + total))

    ranked = sorted(scores.items(), key=lambda kv: (kv[1], kv[0]))
    if params.dedup_threshold < 1:
        kept: list[tuple[str, float]] = []
        for cand, score in ranked:
            if all(_similarity(cand, other) <= params.dedup_threshold for other, _ in kept):
                kept.append((cand, score))
    else:
        kept = ranked
    selected = _select(kept, params, stop, _distinct_content_words(sentences, stop), lower_is_better=True)
    return KeywordSet(YAKE, dict(ranked), selected, params)


# -- marking -------------------------------------------------------------------


def extract_song_keywords(song: Song, extractor: str = YAKE, params: ExtractorParams = ExtractorParams(),
                          stoplist: Optional[Stoplist] = None) -> KeywordSet:
    lyrics = song.lyrics()
    if extractor == RAKE:
        return rake_extract(lyrics, stoplist, params)
    if extractor == YAKE:
        return yake_extract(lyrics, params, stoplist)
    raise ValueError(f"unknown extractor {extractor!r}")


def mark_words(song: Song, kws: KeywordSet) -> list[tuple[WordEntry, bool]]:
    return [(w, normalize_token(w.text) in kws.selected) for w in song.words]


def jaccard(a: frozenset[str], b: frozenset[str]) -> Optional[float]:
    union = a | b
    return len(a & b) / len(union) if union else None
