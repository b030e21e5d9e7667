"""Reader, writer and value types for the LRM (Lyrics-Rhythm Matching) text format.

A document looks like::

    TITLE: Red River Valley
    TIMESIG: 4 4
    From -0 (4)
    valley 1 (2) 2 (4)
    going 1 (4) 0 (2.5,2)
    *

Each word line carries one ``beat (durations)`` group per syllable.  Beat codes
are ``1`` (downbeat), ``2`` (second strong beat) and ``0`` (weak beat); a
leading ``-`` marks a pickup note.  Durations use the note-length codes in
:class:`DurationCode`; several codes in one group are tied notes sung on a
single syllable.  ``*``, ``#`` and ``%`` on their own line separate phrases,
verses and bridges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from os import PathLike
from pathlib import Path
from typing import IO, Iterator, Union

from .diagnostics import INFO, WARNING, Diagnostic
from .errors import (
    BadBeatCode,
    BadDurationCode,
    BadHeader,
    BadSeparator,
    DecodeError,
    EmptyDurationList,
    MissingGroups,
    MissingHeader,
    UnbalancedParens,
    UnsupportedDenominator,
)

_DECIMAL = re.compile(r"[0-9]+(?:\.[0-9]+)?", re.ASCII)
_BEAT = re.compile(r"-?[012]", re.ASCII)
_BEAT_TOKEN = re.compile(r"[^\s(]+")
_WORD_TOKEN = re.compile(r"[^\s()]+")


class DurationCode(Enum):
    """The ten note-length codes: integer part is the note value, ``.5`` marks a dot."""

    WHOLE = "1"
    HALF = "2"
    QUARTER = "4"
    EIGHTH = "8"
    SIXTEENTH = "16"
    DOTTED_WHOLE = "1.5"
    DOTTED_HALF = "2.5"
    DOTTED_QUARTER = "4.5"
    DOTTED_EIGHTH = "8.5"
    DOTTED_SIXTEENTH = "16.5"

    @property
    def base(self) -> int:
        return int(self.value.split(".")[0])

    @property
    def dotted(self) -> bool:
        return "." in self.value

    @classmethod
    def parse(cls, text: str) -> "DurationCode":
        """Accept any decimal literal numerically equal to one of the codes (``4.0`` -> ``4``)."""
        text = text.strip()
        if not _DECIMAL.fullmatch(text):
            raise ValueError(f"not a duration code: {text!r}")
        whole, _, frac = text.partition(".")
        frac = frac.rstrip("0")
        canonical = str(int(whole)) + (f".{frac}" if frac else "")
        try:
            return cls(canonical)
        except ValueError:
            raise ValueError(f"not a duration code: {text!r}") from None

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class TimeSignature:
    numerator: int
    denominator: int

    def __post_init__(self):
        if self.numerator < 1 or self.denominator < 1:
            raise ValueError(f"time signature must be positive: {self.numerator}/{self.denominator}")

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class BeatCode:
    raw: int  # 1 downbeat, 2 second strong beat, 0 weak beat
    pickup: bool = False

    def __post_init__(self):
        if self.raw not in (0, 1, 2):
            raise ValueError(f"beat code must be 0, 1 or 2, got {self.raw}")

    @property
    def is_strong(self) -> bool:
        return self.raw != 0

    @property
    def is_downbeat(self) -> bool:
        return self.raw == 1

    @classmethod
    def parse(cls, text: str) -> "BeatCode":
        if not _BEAT.fullmatch(text):
            raise ValueError(f"not a beat code: {text!r}")
        return cls(int(text[-1]), text.startswith("-"))

    def __str__(self) -> str:
        return ("-" if self.pickup else "") + str(self.raw)


@dataclass(frozen=True)
class SyllableGroup:
    beat: BeatCode
    durations: tuple[DurationCode, ...]

    def __post_init__(self):
        if not self.durations:
            raise ValueError("a syllable group needs at least one duration")

    def __str__(self) -> str:
        return f"{self.beat} ({','.join(d.value for d in self.durations)})"


def _check_word_text(text: str) -> None:
    if not text:
        raise ValueError("empty lyric token")
    if any(ch.isspace() or ch in "()" for ch in text):
        raise ValueError(f"lyric token may not contain whitespace or parentheses: {text!r}")
    if text[0] in "*#%":
        raise ValueError(f"lyric token may not start with a separator symbol: {text!r}")
    if text.casefold().startswith(("title:", "timesig:")):
        raise ValueError(f"lyric token collides with a header keyword: {text!r}")


@dataclass(frozen=True)
class WordEntry:
    text: str
    groups: tuple[SyllableGroup, ...]
    line: int = field(default=0, compare=False)

    def __post_init__(self):
        _check_word_text(self.text)
        if not self.groups:
            raise ValueError(f"word {self.text!r} has no syllable groups")

    def __str__(self) -> str:
        return " ".join([self.text, *(str(g) for g in self.groups)])


@dataclass(frozen=True)
class PhraseBreak:
    line: int = field(default=0, compare=False)
    symbol = "*"


@dataclass(frozen=True)
class VerseBreak:
    line: int = field(default=0, compare=False)
    symbol = "#"


@dataclass(frozen=True)
class BridgeMark:
    line: int = field(default=0, compare=False)
    symbol = "%"


Separator = Union[PhraseBreak, VerseBreak, BridgeMark]
Item = Union[WordEntry, PhraseBreak, VerseBreak, BridgeMark]
SEPARATORS = {"*": PhraseBreak, "#": VerseBreak, "%": BridgeMark}


@dataclass(frozen=True)
class Song:
    title: str
    timesig: TimeSignature
    items: tuple[Item, ...] = ()

    def __post_init__(self):
        if self.title != self.title.strip() or len(self.title.splitlines()) > 1:
            raise ValueError(f"title must be a single stripped line: {self.title!r}")

    @property
    def words(self) -> list[WordEntry]:
        return [item for item in self.items if isinstance(item, WordEntry)]

    @property
    def group_count(self) -> int:
        return sum(len(w.groups) for w in self.words)

    def lyrics(self) -> str:
        """Lyric text with one phrase per line (separators become line breaks)."""
        lines: list[list[str]] = [[]]
        for item in self.items:
            if isinstance(item, WordEntry):
                lines[-1].append(item.text)
            elif lines[-1]:
                lines.append([])
        return "\n".join(" ".join(line) for line in lines if line)


# -- parsing -------------------------------------------------------------------

Source = Union[str, bytes, IO[str], IO[bytes]]


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        try:
            source = bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(f"input is not valid UTF-8 ({exc.reason})", 1, exc.start + 1) from None
    return source.lstrip("﻿")


def _parse_word_line(line: str, lineno: int, col0: int) -> WordEntry:
    m = _WORD_TOKEN.match(line)
    if m is None:
        raise UnbalancedParens("expected a lyric token before '('", lineno, col0)
    text = m.group()
    pos = m.end()
    if pos < len(line) and not line[pos].isspace():
        raise UnbalancedParens(f"unexpected {line[pos]!r} in lyric token", lineno, col0 + pos)
    groups = []
    n = len(line)
    while True:
        while pos < n and line[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _BEAT_TOKEN.match(line, pos)
        if m is None:
            raise BadBeatCode("missing beat code before '('", lineno, col0 + pos)
        token = m.group()
        if ")" in token:
            raise UnbalancedParens("unexpected ')'", lineno, col0 + pos + token.index(")"))
        if not _BEAT.fullmatch(token):
            raise BadBeatCode(f"bad beat code {token!r} (expected 0, 1, 2, optionally prefixed by '-')", lineno, col0 + pos)
        beat = BeatCode.parse(token)
        pos = m.end()
        while pos < n and line[pos].isspace():
            pos += 1
        if pos >= n or line[pos] != "(":
            raise UnbalancedParens(f"expected '(' after beat code {token!r}", lineno, col0 + pos)
        close = line.find(")", pos + 1)
        nested = line.find("(", pos + 1)
        if close == -1:
            raise UnbalancedParens("unclosed '('", lineno, col0 + pos)
        if nested != -1 and nested < close:
            raise UnbalancedParens("nested '('", lineno, col0 + nested)
        inner = line[pos + 1 : close]
        if not inner.strip():
            raise EmptyDurationList("empty duration list", lineno, col0 + pos)
        durations = []
        offset = pos + 1
        for piece in inner.split(","):
            try:
                durations.append(DurationCode.parse(piece))
            except ValueError:
                lead = len(piece) - len(piece.lstrip())
                raise BadDurationCode(
                    f"bad duration code {piece.strip()!r} (expected one of "
                    f"{', '.join(c.value for c in DurationCode)})",
                    lineno,
                    col0 + offset + lead,
                ) from None
            offset += len(piece) + 1
        groups.append(SyllableGroup(beat, tuple(durations)))
        pos = close + 1
    if not groups:
        raise MissingGroups(f"word {text!r} has no beat/duration groups", lineno, col0 + len(text))
    return WordEntry(text, tuple(groups), line=lineno)


def _header_value(line: str, keyword: str) -> str | None:
    if line[: len(keyword)].casefold() == keyword:
        return line[len(keyword) :].strip()
    return None


def parse_lrm(source: Source) -> Song:
    """Parse an LRM document.

    ``source`` is the document text, UTF-8 bytes, or an open file.  Every
    failure is an :class:`~lrmkit.errors.LRMSyntaxError` carrying the line
    and column where it was detected.
    """
    text = _read_text(source)
    title = None
    timesig = None
    items: list[Item] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        col0 = len(raw) - len(raw.lstrip()) + 1
        value = _header_value(line, "title:")
        if value is not None:
            if title is not None:
                raise BadHeader("duplicate TITLE header", lineno, col0)
            if items:
                raise BadHeader("TITLE must precede the lyrics", lineno, col0)
            title = value
            continue
        value = _header_value(line, "timesig:")
        if value is not None:
            if timesig is not None:
                raise BadHeader("duplicate TIMESIG header", lineno, col0)
            if items:
                raise BadHeader("TIMESIG must precede the lyrics", lineno, col0)
            parts = value.split()
            if len(parts) != 2 or not all(p.isascii() and p.isdigit() for p in parts):
                raise BadHeader(f"TIMESIG needs two positive integers, got {value!r}", lineno, col0)
            num, den = int(parts[0]), int(parts[1])
            if num < 1 or den < 1:
                raise BadHeader(f"TIMESIG needs two positive integers, got {value!r}", lineno, col0)
            timesig = TimeSignature(num, den)
            continue
        if title is None or timesig is None:
            missing = "TITLE" if title is None else "TIMESIG"
            raise MissingHeader(f"{missing} header missing before first lyric line", lineno, col0)
        if line in SEPARATORS:
            items.append(SEPARATORS[line](line=lineno))
            continue
        if line[0] in SEPARATORS:
            raise BadSeparator(f"separator {line[0]!r} must be alone on its line", lineno, col0)
        items.append(_parse_word_line(line, lineno, col0))
    if title is None or timesig is None:
        missing = "TITLE" if title is None else "TIMESIG"
        raise MissingHeader(f"{missing} header missing", max(lineno, 1), 1)
    return Song(title, timesig, tuple(items))


def read_lrm_file(path: Union[str, PathLike]) -> Song:
    return parse_lrm(Path(path).read_bytes())


# -- writing -------------------------------------------------------------------


def _item_lines(song: Song) -> Iterator[str]:
    yield f"TITLE: {song.title}"
    yield f"TIMESIG: {song.timesig.numerator} {song.timesig.denominator}"
    for item in song.items:
        yield str(item) if isinstance(item, WordEntry) else item.symbol


def serialize_lrm(song: Song) -> str:
    """Canonical text: headers, then one word or separator per line."""
    return "\n".join(_item_lines(song)) + "\n"


# -- durations -----------------------------------------------------------------


def duration_code_to_beats(code: DurationCode, timesig: TimeSignature) -> Fraction:
    """Length of ``code`` in beats of ``timesig``; exact.

    >>> duration_code_to_beats(DurationCode.DOTTED_HALF, TimeSignature(4, 4))
    Fraction(3, 1)
    """
    if timesig.denominator != 4:
        raise UnsupportedDenominator(f"only x/4 meters are supported, got {timesig}")
    beats = Fraction(timesig.denominator, code.base)
    if code.dotted:
        beats *= Fraction(3, 2)
    return beats


def lint_song(song: Song, song_id: str = "") -> list[Diagnostic]:
    """Header-level findings that do not stop parsing."""
    found = []
    ts = song.timesig
    if ts.numerator not in (3, 4):
        found.append(
            Diagnostic("timesig-numerator", f"unusual meter {ts}; only 3/4 and 4/4 are expected", WARNING, song_id,
                       expected="3 or 4", actual=str(ts.numerator))
        )
    if ts.denominator != 4:
        found.append(
            Diagnostic("timesig-denominator", f"denominator {ts.denominator} cannot be converted to beats", WARNING,
                       song_id, expected="4", actual=str(ts.denominator))
        )
    for item in song.items:
        if isinstance(item, BridgeMark):
            found.append(
                Diagnostic("bridge-flat", "'%' bridge marker treated as a flat marker (no nesting)", INFO, song_id,
                           line=item.line)
            )
    return found
