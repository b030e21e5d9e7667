"""Exception hierarchy shared by every lrmkit module."""

from __future__ import annotations


class LRMError(Exception):
    """Base class for all lrmkit errors."""


# -- format ------------------------------------------------------------------


class LRMSyntaxError(LRMError):
    """A positioned error raised while reading an LRM document."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class MissingHeader(LRMSyntaxError):
    pass


class BadHeader(LRMSyntaxError):
    pass


class BadBeatCode(LRMSyntaxError):
    pass


class BadDurationCode(LRMSyntaxError):
    pass


class UnbalancedParens(LRMSyntaxError):
    pass


class EmptyDurationList(LRMSyntaxError):
    pass


class MissingGroups(LRMSyntaxError):
    pass


class BadSeparator(LRMSyntaxError):
    pass


class DecodeError(LRMSyntaxError):
    pass


class UnsupportedDenominator(LRMError):
    pass


# -- lexicon / keywords --------------------------------------------------------


class EmptyWord(LRMError):
    pass


class EmptyLyrics(LRMError):
    pass


# -- metrics -------------------------------------------------------------------


class MetricsError(LRMError):
    pass


class MixedKinds(MetricsError):
    pass


class EmptyCounts(MetricsError):
    pass


class NoStressedRecords(MetricsError):
    pass


class NoDenominator(MetricsError):
    pass


class ZeroConditionCount(MetricsError):
    pass


class EmptyRecords(MetricsError):
    pass


class DegenerateX(MetricsError):
    pass


# -- corpus --------------------------------------------------------------------


class NoFilesFound(LRMError):
    pass


class DuplicateSongId(LRMError):
    pass


class ReportIOError(LRMError):
    """A report could not be written to its destination."""
