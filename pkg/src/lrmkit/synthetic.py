"""Random, metrically valid songs for load and property testing."""

from __future__ import annotations

import random
from fractions import Fraction
from os import PathLike
from pathlib import Path
from typing import Optional, Sequence, Union

from .lexicon import Lexicon, bundled_lexicon, choose_pronunciation, stress_digits
from .lrm_format import BeatCode, DurationCode, PhraseBreak, Song, SyllableGroup, TimeSignature, WordEntry, serialize_lrm

_CODE_FOR_BEATS = {Fraction(2): DurationCode.HALF, Fraction(1): DurationCode.QUARTER,
                   Fraction(1, 2): DurationCode.EIGHTH}


def beat_code_at(offset: Fraction, numerator: int, pickup: bool = False) -> BeatCode:
    """Code for a note starting ``offset`` beats into a measure."""
    if offset == 0:
        raw = 1
    elif numerator % 2 == 0 and numerator >= 4 and offset == numerator // 2:
        raw = 2
    else:
        raw = 0
    return BeatCode(raw, pickup)


def measure_rhythm(rng: random.Random, length: int) -> list[tuple[Fraction, Fraction]]:
    """(offset, beats) pairs filling ``length`` beats; halves start on even beats."""
    notes = []
    pos = Fraction(0)
    while pos < length:
        left = length - pos
        choices = [Fraction(1)]
        if left >= 2 and pos.denominator == 1 and pos % 2 == 0:
            choices.append(Fraction(2))
        if pos.denominator == 1:
            choices.append(Fraction(1, 2))
        beats = rng.choice(choices)
        if beats == Fraction(1, 2):
            notes += [(pos, beats), (pos + beats, beats)]
            pos += 1
        else:
            notes.append((pos, beats))
            pos += beats
    return notes


def vocabulary(lex: Lexicon) -> dict[int, list[str]]:
    """Alphabetic lexicon words bucketed by syllable count (1 to 3)."""
    buckets: dict[int, list[str]] = {}
    for word in sorted(lex.entries):
        if not word.isalpha():
            continue
        n = len(stress_digits(choose_pronunciation(lex.entries[word])))
        if 1 <= n <= 3:
            buckets.setdefault(n, []).append(word)
    return buckets


def random_song(rng: random.Random, title: str, timesig: TimeSignature, measures: int = 8,
                vocab: Optional[dict[int, list[str]]] = None, pickup: Optional[bool] = None) -> Song:
    vocab = vocab or vocabulary(bundled_lexicon())
    num = timesig.numerator
    if pickup is None:
        pickup = rng.random() < 0.5
    groups: list[SyllableGroup] = []
    if pickup:
        groups.append(SyllableGroup(BeatCode(0, True), (DurationCode.QUARTER,)))
    for m in range(measures):
        length = num - 1 if pickup and m == measures - 1 else num
        for offset, beats in measure_rhythm(rng, length):
            groups.append(SyllableGroup(beat_code_at(offset, num), (_CODE_FOR_BEATS[beats],)))

    items: list = []
    i = 0
    since_break = 0
    while i < len(groups):
        left = len(groups) - i
        n = rng.choice([k for k in vocab if k <= left])
        word = rng.choice(vocab[n])
        if since_break == 0 and rng.random() < 0.3:
            word = word.capitalize()
        items.append(WordEntry(word, tuple(groups[i : i + n])))
        i += n
        since_break += 1
        if since_break >= rng.randint(5, 8) and i < len(groups):
            items.append(PhraseBreak())
            since_break = 0
    return Song(title, timesig, tuple(items))


def write_corpus(directory: Union[str, PathLike], n_songs: int, seed: int = 0,
                 timesigs: Sequence[TimeSignature] = (TimeSignature(3, 4), TimeSignature(4, 4)),
                 measures: int = 8) -> list[Path]:
    """Write ``n_songs`` files named ``song_000.lrm`` ... into ``directory``."""
    rng = random.Random(seed)
    vocab = vocabulary(bundled_lexicon())
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for k in range(n_songs):
        song = random_song(rng, f"Synthetic {k}", timesigs[k % len(timesigs)], measures, vocab)
        path = out / f"song_{k:03d}.lrm"
        path.write_text(serialize_lrm(song), encoding="utf-8")
        paths.append(path)
    return paths
