"""Join lyric stress labels with beat classes into observation records."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional, Sequence

from .lexicon import SyllableAnnotation
from .lrm_format import Song, TimeSignature, WordEntry
from .score import STRONG, beat_class


class Kind(str, Enum):
    WORD = "word"
    SYLLABLE = "syllable"

    def __str__(self) -> str:
        return self.value


WORD_BEAT_MODES = ("first", "any_strong")


@dataclass(frozen=True)
class LLERecord:
    song_id: str
    timesig: TimeSignature
    kind: Kind
    token: str
    stressed: bool  # keyword / stressed syllable
    beat_strong: bool
    is_downbeat: bool
    pickup: bool = False
    extractor: Optional[str] = None  # word records only

    def to_row(self) -> dict:
        row = asdict(self)
        row["timesig"] = str(self.timesig)
        row["kind"] = self.kind.value
        row["extractor"] = self.extractor or ""
        return row


RECORD_FIELDS = ("song_id", "timesig", "kind", "token", "stressed", "beat_strong", "is_downbeat", "pickup", "extractor")


def align_syllables(song: Song, annotations: Sequence[SyllableAnnotation], song_id: Optional[str] = None) -> list[LLERecord]:
    """One record per syllable group; ``annotations`` must already match the group counts."""
    words = song.words
    if len(annotations) != len(words):
        raise ValueError(f"{len(annotations)} annotations for {len(words)} words")
    sid = song.title if song_id is None else song_id
    records = []
    for entry, ann in zip(words, annotations):
        if len(ann.syllables) != len(entry.groups):
            raise ValueError(f"{entry.text!r}: {len(ann.syllables)} syllables vs {len(entry.groups)} groups; reconcile first")
        for group, (fragment, stressed) in zip(entry.groups, ann.syllables):
            strength, down = beat_class(group.beat)
            records.append(
                LLERecord(sid, song.timesig, Kind.SYLLABLE, fragment or entry.text, stressed, strength == STRONG, down,
                          group.beat.pickup)
            )
    return records


def word_beat(entry: WordEntry, mode: str = "first"):
    """The group whose beat represents the whole word."""
    if mode == "first":
        return entry.groups[0].beat
    if mode == "any_strong":
        for group in entry.groups:
            if group.beat.is_strong:
                return group.beat
        return entry.groups[0].beat
    raise ValueError(f"unknown word beat mode {mode!r}")


def align_words(song: Song, marks: Sequence[tuple[WordEntry, bool]] | Sequence[bool], song_id: Optional[str] = None,
                extractor: Optional[str] = None, mode: str = "first") -> list[LLERecord]:
    """One record per word, using the beat of its first syllable group by default.

    ``marks`` is the output of :func:`lrmkit.keywords.mark_words` or a plain
    sequence of keyword flags in word order.
    """
    words = song.words
    flags = [m[1] if isinstance(m, tuple) else bool(m) for m in marks]
    if len(flags) != len(words):
        raise ValueError(f"{len(flags)} keyword flags for {len(words)} words")
    sid = song.title if song_id is None else song_id
    records = []
    for entry, is_kw in zip(words, flags):
        beat = word_beat(entry, mode)
        strength, down = beat_class(beat)
        records.append(
            LLERecord(sid, song.timesig, Kind.WORD, entry.text, is_kw, strength == STRONG, down,
                      entry.groups[0].beat.pickup, extractor)
        )
    return records
