"""Derive a music-score table from an LRM song and check it against the meter.

Every duration code becomes one :class:`NoteEvent` with pitch fixed at C4.
Onsets are exact rationals.  Measures are laid on a grid anchored at the first
downbeat; notes before it form a pickup measure (index 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .diagnostics import INFO, WARNING, Diagnostic
from .lrm_format import (
    BeatCode,
    DurationCode,
    Song,
    TimeSignature,
    VerseBreak,
    WordEntry,
    duration_code_to_beats,
)

STRONG = "strong"
WEAK = "weak"
DEFAULT_PITCH = "C4"


def beat_class(code: BeatCode) -> tuple[str, bool]:
    """Return ``(strength, is_downbeat)``; the pickup flag does not matter."""
    return (STRONG if code.raw in (1, 2) else WEAK), code.raw == 1


@dataclass(frozen=True)
class NoteEvent:
    duration_code: DurationCode
    beats: Fraction
    beat: BeatCode  # continuation notes repeat their group's code
    onset: Fraction  # beats from the start of the song
    measure: int
    offset: Fraction  # position inside the measure; pickups are right-aligned to the barline
    word: Optional[str] = None  # only on the first note of a syllable group
    syllable_index: Optional[int] = None
    word_index: Optional[int] = None
    pickup: bool = False  # lies in a pickup measure
    pitch: str = DEFAULT_PITCH
    line: int = field(default=0, compare=False)

    @property
    def starts_syllable(self) -> bool:
        return self.word is not None


@dataclass(frozen=True)
class Measure:
    index: int
    events: tuple[NoteEvent, ...]
    total_beats: Fraction
    start: Fraction
    pickup: bool = False


def _first_downbeat(groups: Sequence[tuple], start: int) -> Optional[int]:
    for k in range(start, len(groups)):
        beat = groups[k][3].beat
        if beat.raw == 1 and not beat.pickup:
            return k
    return None


def derive_score(song: Song) -> list[NoteEvent]:
    """One event per duration code, in source order, with onset and measure."""
    num = song.timesig.numerator
    # (word_index, syllable_index, word, group, onset, after_verse_break)
    groups = []
    onset = Fraction(0)
    verse_start = False
    word_index = -1
    for item in song.items:
        if isinstance(item, VerseBreak):
            verse_start = True
            continue
        if not isinstance(item, WordEntry):
            continue
        word_index += 1
        for si, group in enumerate(item.groups):
            groups.append((word_index, si, item, group, onset, verse_start))
            verse_start = False
            for code in group.durations:
                onset += duration_code_to_beats(code, song.timesig)

    # pickup regions: [start, end) group ranges ending at a non-pickup downbeat
    regions = {}
    k = _first_downbeat(groups, 0)
    if k:
        regions[0] = k
    for j, g in enumerate(groups):
        if j and g[5] and g[3].beat.pickup:
            k = _first_downbeat(groups, j + 1)
            if k is not None:
                regions[j] = k

    events: list[NoteEvent] = []
    anchor = Fraction(0)
    base = 1
    last_index = 0
    j = 0
    while j < len(groups):
        if j in regions:
            end = regions[j]
            index = 0 if j == 0 else last_index + 1
            region_total = groups[end][4] - groups[j][4]
            shift = num - region_total
            for g in groups[j:end]:
                events.extend(_group_events(g, song.timesig, lambda on: (index, shift + on - groups[j][4], True)))
            last_index = index
            anchor = groups[end][4]
            base = index + 1
            j = end
            continue

        def locate(on, anchor=anchor, base=base):
            bar, pos = divmod(on - anchor, num)
            return base + int(bar), pos, False

        new = _group_events(groups[j], song.timesig, locate)
        events.extend(new)
        last_index = max(last_index, *(e.measure for e in new))
        j += 1
    return events


def _group_events(g, timesig: TimeSignature, locate) -> list[NoteEvent]:
    word_index, si, word, group, onset, _ = g
    out = []
    for ci, code in enumerate(group.durations):
        beats = duration_code_to_beats(code, timesig)
        measure, offset, pickup = locate(onset)
        out.append(
            NoteEvent(
                duration_code=code,
                beats=beats,
                beat=group.beat,
                onset=onset,
                measure=measure,
                offset=offset,
                word=word.text if ci == 0 else None,
                syllable_index=si if ci == 0 else None,
                word_index=word_index,
                pickup=pickup,
                line=word.line,
            )
        )
        onset += beats
    return out


def segment_measures(events: Sequence[NoteEvent], timesig: TimeSignature) -> list[Measure]:
    """Group events into measures; gaps left by over-long notes become empty measures."""
    num = timesig.numerator
    measures: list[Measure] = []
    bucket: list[NoteEvent] = []

    def close():
        first = bucket[0]
        start = first.onset if first.pickup else first.onset - first.offset
        if measures and not first.pickup:
            prev = measures[-1]
            for missing in range(prev.index + 1, first.measure):
                gap_start = start - (first.measure - missing) * num
                measures.append(Measure(missing, (), Fraction(0), gap_start))
        measures.append(
            Measure(first.measure, tuple(bucket), sum((e.beats for e in bucket), Fraction(0)), start, first.pickup)
        )

    for event in events:
        if bucket and (event.measure != bucket[0].measure or event.pickup != bucket[0].pickup):
            close()
            bucket = []
        bucket.append(event)
    if bucket:
        close()
    return measures


def _second_strong_offset(num: int) -> Optional[int]:
    return num // 2 if num % 2 == 0 and num >= 4 else None


def validate_meter(measures: Sequence[Measure], timesig: TimeSignature, song_id: str = "") -> list[Diagnostic]:
    """Check beat codes and measure lengths against the grid."""
    num = timesig.numerator
    strong2 = _second_strong_offset(num)
    initial_pickup = measures[0].total_beats if measures and measures[0].pickup else Fraction(0)
    found: list[Diagnostic] = []

    def report(code, message, m, ev=None, expected=None, actual=None):
        found.append(
            Diagnostic(
                code,
                message,
                WARNING,
                song_id,
                line=ev.line if ev is not None else 0,
                measure=m.index,
                onset=str(ev.onset if ev is not None else m.start),
                expected=None if expected is None else str(expected),
                actual=None if actual is None else str(actual),
            )
        )

    for i, m in enumerate(measures):
        nxt = measures[i + 1] if i + 1 < len(measures) else None
        if m.pickup:
            if m.index > 0:
                found.append(
                    Diagnostic("pickup-reopened", "pickup after a verse break starts a new measure grid", INFO,
                               song_id, measure=m.index, onset=str(m.start))
                )
            if m.total_beats >= num:
                report("measure-total", "pickup measure is not shorter than a full measure", m,
                       expected=f"< {num}", actual=m.total_beats)
        elif m.total_beats != num:
            complement = None
            if nxt is None and initial_pickup:
                complement = initial_pickup
            elif nxt is not None and nxt.pickup:
                complement = nxt.total_beats
            if complement is None or m.total_beats + complement != num:
                report("measure-total", f"measure holds {m.total_beats} beats", m, expected=num, actual=m.total_beats)

        for ev in m.events:
            if ev.offset + ev.beats > num:
                report("straddle", "note crosses a barline", m, ev, expected=f"end <= {num}",
                       actual=ev.offset + ev.beats)
            if not ev.starts_syllable:
                continue
            raw = ev.beat.raw
            if raw == 1 and ev.offset != 0:
                report("downbeat-offset", f"downbeat code on {ev.word!r} away from the barline", m, ev,
                       expected=0, actual=ev.offset)
            if raw != 1 and ev.offset == 0 and not m.pickup:
                report("barline-not-downbeat", f"code {raw} on {ev.word!r} at the start of a measure", m, ev,
                       expected=1, actual=raw)
            if raw == 2 and (strong2 is None or ev.offset != strong2):
                report("second-strong-offset", f"second strong beat on {ev.word!r} at offset {ev.offset}", m, ev,
                       expected=strong2 if strong2 is not None else f"none in {timesig}", actual=ev.offset)
            if ev.beat.pickup and not m.pickup:
                report("stray-pickup", f"pickup flag on {ev.word!r} outside a pickup measure", m, ev)
    return found


def check_song_meter(song: Song, song_id: str = "") -> tuple[list[NoteEvent], list[Measure], list[Diagnostic]]:
    events = derive_score(song)
    measures = segment_measures(events, song.timesig)
    return events, measures, validate_meter(measures, song.timesig, song_id)


# -- export --------------------------------------------------------------------

MEASURE_RULE = "-" * 24
SCORE_HEADER = ("Pitch", "Duration", "Beat", "Word")


def score_table_rows(measures: Iterable[Measure]) -> list[Optional[tuple[str, str, str, str]]]:
    """Rows of (pitch, duration, beat, word); ``None`` marks a measure boundary.

    The word is shown on the first note of a word only, as in the printed
    score table; pickup signs are dropped from the beat column.
    """
    rows: list[Optional[tuple[str, str, str, str]]] = []
    for n, m in enumerate(measures):
        if n:
            rows.append(None)
        for ev in m.events:
            word = ev.word if ev.syllable_index == 0 else ""
            rows.append((ev.pitch, ev.duration_code.value, str(ev.beat.raw), word or ""))
    return rows


def format_score_table(measures: Iterable[Measure], sep: str = "\t") -> str:
    lines = [sep.join(SCORE_HEADER)]
    for row in score_table_rows(measures):
        lines.append(MEASURE_RULE if row is None else sep.join(row))
    return "\n".join(lines) + "\n"


def score_records(events: Iterable[NoteEvent]) -> list[dict]:
    """Structured export with onsets and measure indices (rationals as text)."""
    return [
        {
            "pitch": ev.pitch,
            "duration": ev.duration_code.value,
            "beats": str(ev.beats),
            "beat": str(ev.beat),
            "word": ev.word or "",
            "syllable_index": "" if ev.syllable_index is None else ev.syllable_index,
            "onset": str(ev.onset),
            "offset": str(ev.offset),
            "measure": ev.measure,
            "pickup": ev.pickup,
        }
        for ev in events
    ]
