"""CMU pronouncing dictionary loading and per-word syllable stress."""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field, replace
from importlib import resources
from os import PathLike
from pathlib import Path
from typing import IO, Iterable, Mapping, Optional, Sequence, Union

from .diagnostics import INFO, WARNING, Diagnostic
from .errors import EmptyWord
from .lrm_format import Song
from .text import normalize_token

LEXICON = "lexicon"
FALLBACK = "fallback"

Pronunciation = tuple[str, ...]

_HEAD = re.compile(r"(.+?)(?:\((\d+)\))?")
_PHONE = re.compile(r"[A-Z]+[012]?")
_VERSION = re.compile(r";;;\s*version:\s*(\S+)", re.IGNORECASE)
_VOWEL_RUN = re.compile(r"[aeiouy]+")
_ONSET_DIGRAPHS = {"th", "sh", "ch", "ph", "wh"}

# phonemes appended for clitics missing from the dictionary ("river's" -> RIVER + Z)
_CLITIC_PHONES = {"s": ("Z",), "d": ("D",), "ll": ("L",), "ve": ("V",), "re": ("R",), "m": ("M",), "t": ("T",)}


@dataclass(frozen=True)
class Lexicon:
    entries: Mapping[str, tuple[Pronunciation, ...]]
    version: str = "unknown"
    malformed_lines: tuple[int, ...] = ()

    @property
    def malformed(self) -> int:
        return len(self.malformed_lines)

    def lookup(self, word: str) -> tuple[Pronunciation, ...]:
        return self.entries.get(word.casefold(), ())

    def __contains__(self, word: str) -> bool:
        return word.casefold() in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def load_lexicon(source: Union[str, IO[str], Iterable[str]], version: Optional[str] = None) -> Lexicon:
    """Read CMU-dict text: ``WORD  PH0 PH1 ...``, variants as ``WORD(2)``, ``;;;`` comments.

    A ``;;; version: <id>`` comment sets the version unless one is passed in.
    Malformed lines are skipped and their line numbers kept on the result.
    """
    lines = source.splitlines() if isinstance(source, str) else source
    entries: dict[str, list[Pronunciation]] = defaultdict(list)
    bad = []
    found_version = None
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith(";;;"):
            m = _VERSION.match(line)
            if m and found_version is None:
                found_version = m.group(1)
            continue
        line = line.split("#", 1)[0].strip()
        parts = line.split()
        if len(parts) < 2:
            bad.append(lineno)
            continue
        head = _HEAD.fullmatch(parts[0])
        phones = tuple(parts[1:])
        if head is None or not all(_PHONE.fullmatch(p) for p in phones):
            bad.append(lineno)
            continue
        entries[head.group(1).casefold()].append(phones)
    return Lexicon(
        {word: tuple(prons) for word, prons in entries.items()},
        version or found_version or "unknown",
        tuple(bad),
    )


def load_lexicon_file(path: Union[str, PathLike]) -> Lexicon:
    path = Path(path)
    with path.open(encoding="utf-8", errors="replace") as fh:
        lex = load_lexicon(fh)
    if lex.version == "unknown":
        lex = replace(lex, version=path.name)
    return lex


def bundled_lexicon() -> Lexicon:
    """The small CMU subset shipped with the package (fixture and demo vocabulary)."""
    text = resources.files("lrmkit").joinpath("data/cmudict_subset.dict").read_text(encoding="utf-8")
    return load_lexicon(text)


def stress_label(digit: int) -> bool:
    """Primary stress (1) counts as stressed; secondary (2) and none (0) do not."""
    if digit not in (0, 1, 2):
        raise ValueError(f"stress digit must be 0, 1 or 2, got {digit!r}")
    return digit == 1


def stress_digits(pron: Pronunciation) -> list[int]:
    return [int(p[-1]) for p in pron if p[-1].isdigit()]


def choose_pronunciation(prons: Sequence[Pronunciation], variant: str = "stressed") -> Pronunciation:
    """Pick one pronunciation.

    ``first`` takes the first listed entry.  ``stressed`` takes the first entry
    carrying a primary stress among those with the same syllable count as the
    first entry, so citation forms win over reduced ones (``and``: AE1 over AH0).
    """
    if variant == "first":
        return prons[0]
    if variant != "stressed":
        raise ValueError(f"unknown pronunciation variant policy {variant!r}")
    n = len(stress_digits(prons[0]))
    for pron in prons:
        digits = stress_digits(pron)
        if len(digits) == n and 1 in digits:
            return pron
    return prons[0]


@dataclass(frozen=True)
class SyllableAnnotation:
    word: str
    syllables: tuple[tuple[str, bool], ...]  # (surface fragment, stressed)
    source: str = LEXICON
    pronunciation: Optional[Pronunciation] = None
    note: str = ""

    @property
    def stresses(self) -> tuple[bool, ...]:
        return tuple(s for _, s in self.syllables)

    def __len__(self) -> int:
        return len(self.syllables)


def fallback_syllable_count(word: str) -> int:
    """Vowel-group count with a silent final ``e`` dropped; at least one."""
    word = word.casefold()
    groups = _VOWEL_RUN.findall(word)
    n = len(groups)
    if n > 1 and word.endswith("e") and groups[-1] == "e":
        n -= 1
    return max(n, 1)


def surface_fragments(word: str, n: int) -> list[str]:
    """Cut the spelling into ``n`` pieces at vowel-group boundaries (cosmetic only)."""
    if n <= 1:
        return [word]
    lower = word.casefold()
    spans = [list(m.span()) for m in _VOWEL_RUN.finditer(lower) if not (m.start() == 0 and lower[0] == "y" and m.end() == 1)]
    if len(spans) > n and lower.endswith("e") and spans[-1][0] == len(lower) - 1:
        spans.pop()
    while len(spans) > n:
        spans[-2][1] = spans[-1][1]
        spans.pop()
    while len(spans) < n:
        widest = max(range(len(spans)), key=lambda i: spans[i][1] - spans[i][0], default=None)
        if widest is None or spans[widest][1] - spans[widest][0] < 2:
            break
        a, b = spans[widest]
        spans[widest : widest + 1] = [[a, a + 1], [a + 1, b]]
    if len(spans) != n:
        step = len(word) / n
        cuts = [round(step * i) for i in range(n + 1)]
        return [word[cuts[i] : cuts[i + 1]] for i in range(n)]
    cuts = [0]
    for (_, end), (start, _) in zip(spans, spans[1:]):
        # the last consonant (or digraph) of a cluster opens the next syllable
        cut = max(end, start - 1)
        if start - end >= 2 and lower[start - 2 : start] in _ONSET_DIGRAPHS:
            cut = start - 2
        cuts.append(cut)
    cuts.append(len(word))
    return [word[cuts[i] : cuts[i + 1]] for i in range(n)]


def _find_pronunciation(norm: str, lex: Lexicon, variant: str) -> tuple[Optional[Pronunciation], str]:
    prons = lex.lookup(norm)
    if prons:
        return choose_pronunciation(prons, variant), ""
    if "'" in norm:
        base, _, clitic = norm.rpartition("'")
        prons = lex.lookup(base)
        if prons:
            return choose_pronunciation(prons, variant) + _CLITIC_PHONES.get(clitic, ()), "apostrophe-suffix"
        prons = lex.lookup(norm.replace("'", ""))
        if prons:
            return choose_pronunciation(prons, variant), "apostrophe-dropped"
    if "-" in norm:
        parts = [p for p in norm.split("-") if p]
        found = [lex.lookup(p) for p in parts]
        if parts and all(found):
            joined: tuple[str, ...] = ()
            for prons in found:
                joined += choose_pronunciation(prons, variant)
            return joined, "hyphen-compound"
    return None, ""


def syllabify(word: str, lex: Lexicon, variant: str = "stressed") -> SyllableAnnotation:
    norm = normalize_token(word)
    if not norm:
        raise EmptyWord(f"no letters in lyric token {word!r}")
    pron, note = _find_pronunciation(norm, lex, variant)
    flags = [stress_label(d) for d in stress_digits(pron)] if pron else []
    if not flags:
        n = fallback_syllable_count(norm)
        flags = [True] + [False] * (n - 1)
        return SyllableAnnotation(word, tuple(zip(surface_fragments(norm, n), flags)), FALLBACK, None, "oov")
    return SyllableAnnotation(word, tuple(zip(surface_fragments(norm, len(flags)), flags)), LEXICON, pron, note)


def reconcile(annotation: SyllableAnnotation, n_groups: int) -> SyllableAnnotation:
    """Force the syllable count to ``n_groups``: truncate, or pad with unstressed syllables."""
    syllables = list(annotation.syllables)
    if len(syllables) == n_groups:
        return annotation
    if len(syllables) > n_groups:
        tail = "".join(frag for frag, _ in syllables[n_groups - 1 :])
        syllables = syllables[: n_groups - 1] + [(tail, syllables[n_groups - 1][1])]
    else:
        syllables += [("", False)] * (n_groups - len(syllables))
    return replace(annotation, syllables=tuple(syllables))


@dataclass
class SongSyllables:
    annotations: list[SyllableAnnotation] = field(default_factory=list)  # one per WordEntry, reconciled
    diagnostics: list[Diagnostic] = field(default_factory=list)
    fallback_words: int = 0
    mismatched_words: int = 0


def annotate_song(song: Song, lex: Lexicon, variant: str = "stressed", song_id: str = "") -> SongSyllables:
    """Syllabify every word; the LRM group count wins on disagreement."""
    out = SongSyllables()
    for entry in song.words:
        try:
            ann = syllabify(entry.text, lex, variant)
        except EmptyWord:
            out.diagnostics.append(
                Diagnostic("empty-word", f"{entry.text!r} has no letters; marked unstressed", WARNING, song_id,
                           line=entry.line)
            )
            out.annotations.append(
                SyllableAnnotation(entry.text, (("", False),) * len(entry.groups), FALLBACK, None, "no-letters")
            )
            out.fallback_words += 1
            continue
        if ann.source == FALLBACK:
            out.fallback_words += 1
            out.diagnostics.append(
                Diagnostic("oov-fallback", f"{entry.text!r} not in lexicon; spelling heuristic used", INFO, song_id,
                           line=entry.line)
            )
        if len(ann) != len(entry.groups):
            out.mismatched_words += 1
            out.diagnostics.append(
                Diagnostic("syllable-count", f"{entry.text!r}: lexicon has {len(ann)} syllables, file has "
                           f"{len(entry.groups)} groups", WARNING, song_id, line=entry.line,
                           expected=str(len(entry.groups)), actual=str(len(ann)))
            )
            ann = reconcile(ann, len(entry.groups))
        out.annotations.append(ann)
    return out
