"""Lyrics-rhythm matching metrics over :class:`~lrmkit.alignment.LLERecord` sets.

Cells of the confusion matrix::

                   strong beat   weak beat
    stressed LLE   SSB (TP)      SWB (FN)
    unstressed     USB (FP)      UWB (TN)

All ratios are computed from integer counts with a single division and
returned as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from collections import OrderedDict, defaultdict
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from numbers import Real
from typing import Callable, Iterable, Optional, Sequence

from .alignment import LLERecord
from .errors import (
    DegenerateX,
    EmptyCounts,
    EmptyRecords,
    MixedKinds,
    NoDenominator,
    NoStressedRecords,
    ZeroConditionCount,
)

STRONG_VS_WEAK = "strong_vs_weak"
DOWNBEAT_VS_REST = "downbeat_vs_rest"
BEAT_SCOPES = (STRONG_VS_WEAK, DOWNBEAT_VS_REST)
PAPER_FORMULA = "paper_formula"
COMPOSITION = "composition"
NM_MODES = (PAPER_FORMULA, COMPOSITION)

Predicate = Callable[[LLERecord], bool]


@dataclass(frozen=True)
class ConfusionCounts:
    ssb: int = 0
    swb: int = 0
    usb: int = 0
    uwb: int = 0

    @property
    def total(self) -> int:
        return self.ssb + self.swb + self.usb + self.uwb

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(self.ssb + other.ssb, self.swb + other.swb, self.usb + other.usb, self.uwb + other.uwb)

    def to_dict(self) -> dict:
        return asdict(self)


def _on_strong(record: LLERecord, beat_scope: str) -> bool:
    if beat_scope == STRONG_VS_WEAK:
        return record.beat_strong
    if beat_scope == DOWNBEAT_VS_REST:
        return record.is_downbeat
    raise ValueError(f"unknown beat scope {beat_scope!r}")


def confusion(records: Iterable[LLERecord], beat_scope: str = STRONG_VS_WEAK) -> ConfusionCounts:
    cells = [0, 0, 0, 0]
    kinds = set()
    for r in records:
        kinds.add(r.kind)
        if len(kinds) > 1:
            raise MixedKinds(f"records mix kinds {sorted(str(k) for k in kinds)}")
        strong = _on_strong(r, beat_scope)
        cells[(0 if r.stressed else 2) + (0 if strong else 1)] += 1
    return ConfusionCounts(*cells)


def accuracy(c: ConfusionCounts) -> Fraction:
    if c.total == 0:
        raise EmptyCounts("no records")
    return Fraction(c.ssb + c.uwb, c.total)


def stress_matching(c: ConfusionCounts) -> Fraction:
    """SM (sensitivity): share of stressed LLEs on strong beats."""
    if c.ssb + c.swb == 0:
        raise NoStressedRecords("no stressed records")
    return Fraction(c.ssb, c.ssb + c.swb)


def nonstress_matching(c: ConfusionCounts, mode: str = PAPER_FORMULA) -> Fraction:
    """NM.

    ``paper_formula`` is UWB / (SWB + UWB), the printed definition used for the
    published table.  ``composition`` is UWB / (USB + UWB), the share of
    unstressed LLEs that land on weak beats.
    """
    if mode == PAPER_FORMULA:
        denominator = c.swb + c.uwb
    elif mode == COMPOSITION:
        denominator = c.usb + c.uwb
    else:
        raise ValueError(f"unknown NM mode {mode!r}")
    if denominator == 0:
        raise NoDenominator(f"NM ({mode}) has a zero denominator")
    return Fraction(c.uwb, denominator)


def lrm_score(sm: Real, nm: Real) -> Real:
    """Harmonic mean of SM and NM; 0 when both are 0."""
    if sm < 0 or nm < 0:
        raise ValueError("SM and NM must be non-negative")
    if sm + nm == 0:
        return sm * 0
    return 2 * sm * nm / (sm + nm)


def conditional_probability(records: Iterable[LLERecord], event_a: Predicate, event_b: Predicate) -> Fraction:
    """P(A | B) = count(A and B) / count(B)."""
    n_b = n_ab = 0
    for r in records:
        if event_b(r):
            n_b += 1
            n_ab += bool(event_a(r))
    if n_b == 0:
        raise ZeroConditionCount("conditioning event never occurs")
    return Fraction(n_ab, n_b)


# -- named events --------------------------------------------------------------


def _stressed(r):
    return r.stressed


def _unstressed(r):
    return not r.stressed


def _strong(r):
    return r.beat_strong


def _weak(r):
    return not r.beat_strong


def _down(r):
    return r.is_downbeat


def _not_down(r):
    return not r.is_downbeat


EVENTS: dict[str, Predicate] = {
    "S": _stressed,
    "U": _unstressed,
    "SB": _strong,
    "WB": _weak,
    "DB": _down,
    "NDB": _not_down,
    "SSB": lambda r: r.stressed and r.beat_strong,
    "SWB": lambda r: r.stressed and not r.beat_strong,
    "USB": lambda r: not r.stressed and r.beat_strong,
    "UWB": lambda r: not r.stressed and not r.beat_strong,
}
ALIASES = {"KW": "S", "SS": "S", "SLLE": "S", "NKW": "U", "US": "U", "USS": "U", "ULLE": "U"}


def event(name: str) -> Predicate:
    """Resolve an event name such as ``KW``, ``SB`` or ``KW&DB`` to a predicate."""
    parts = []
    for part in name.split("&"):
        key = part.strip().upper()
        key = ALIASES.get(key, key)
        if key not in EVENTS:
            raise ValueError(f"unknown event {part!r}")
        parts.append(EVENTS[key])
    if len(parts) == 1:
        return parts[0]
    return lambda r: all(p(r) for p in parts)


def query(records: Sequence[LLERecord], expr: str) -> Fraction:
    """Evaluate ``"A|B"``, e.g. ``query(records, "SWB|KW")``."""
    a, sep, b = expr.partition("|")
    if not sep:
        raise ValueError(f"expected 'A|B', got {expr!r}")
    return conditional_probability(records, event(a), event(b))


PANEL = {
    STRONG_VS_WEAK: ("SB|S", "S|SB", "WB|U", "U|WB", "SWB|S", "SWB|WB"),
    DOWNBEAT_VS_REST: ("DB|S", "S|DB", "NDB|U", "U|NDB"),
}


def conditional_panel(records: Sequence[LLERecord]) -> dict[str, dict[str, Optional[Fraction]]]:
    """The fixed set of conditional probabilities reported per group; undefined ones are None."""
    out = {}
    for scope, exprs in PANEL.items():
        out[scope] = {}
        for expr in exprs:
            try:
                out[scope][expr] = query(records, expr)
            except ZeroConditionCount:
                out[scope][expr] = None
    return out


# -- distributions -------------------------------------------------------------


@dataclass(frozen=True)
class Distribution:
    total: int
    stressed: int
    unstressed: int
    counts: ConfusionCounts

    @property
    def stressed_share(self) -> Fraction:
        return Fraction(self.stressed, self.total)

    @property
    def unstressed_share(self) -> Fraction:
        return Fraction(self.unstressed, self.total)

    def by_lle(self) -> dict[str, dict[str, Optional[Fraction]]]:
        """Where each LLE class lands: share on strong vs weak beats."""
        c = self.counts
        return {
            "stressed": _shares({"strong": c.ssb, "weak": c.swb}),
            "unstressed": _shares({"strong": c.usb, "weak": c.uwb}),
        }

    def by_beat(self) -> dict[str, dict[str, Optional[Fraction]]]:
        """What each beat class is made of: share of stressed vs unstressed LLEs."""
        c = self.counts
        return {
            "strong": _shares({"stressed": c.ssb, "unstressed": c.usb}),
            "weak": _shares({"stressed": c.swb, "unstressed": c.uwb}),
        }


def _shares(counts: dict[str, int]) -> dict[str, Optional[Fraction]]:
    total = sum(counts.values())
    return {k: (Fraction(v, total) if total else None) for k, v in counts.items()}


def distribution(records: Sequence[LLERecord], beat_scope: str = STRONG_VS_WEAK) -> Distribution:
    if not records:
        raise EmptyRecords("no records")
    c = confusion(records, beat_scope)
    return Distribution(c.total, c.ssb + c.swb, c.usb + c.uwb, c)


# -- regression ----------------------------------------------------------------


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    r: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def ols_fit(points: Sequence[tuple[Real, Real]]) -> RegressionFit:
    """Least-squares line through ``(x, y)`` points with Pearson r (0 when y is constant)."""
    n = len(points)
    if n < 2:
        raise DegenerateX(f"need at least two points, got {n}")
    xs = [Fraction(x) for x, _ in points]
    ys = [Fraction(y) for _, y in points]
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    if sxx == 0:
        raise DegenerateX("x has zero variance")
    slope = sxy / sxx
    intercept = my - slope * mx
    r = float(sxy) / math.sqrt(float(sxx) * float(syy)) if syy else 0.0
    return RegressionFit(float(slope), float(intercept), max(-1.0, min(1.0, r)), n)


def regression_points(records: Iterable[LLERecord]) -> list[tuple[str, int, int]]:
    """Per song: (song id, records on weak beats, stressed records on weak beats)."""
    weak: dict[str, int] = defaultdict(int)
    stressed_weak: dict[str, int] = defaultdict(int)
    order: OrderedDict[str, None] = OrderedDict()
    for r in records:
        order.setdefault(r.song_id, None)
        if not r.beat_strong:
            weak[r.song_id] += 1
            stressed_weak[r.song_id] += r.stressed
    return [(sid, weak[sid], stressed_weak[sid]) for sid in order]


def display(value: Optional[Real], places: int = 3) -> str:
    """Round half-even for reports; raw values stay in structured output."""
    if value is None:
        return "-"
    if isinstance(value, Fraction):
        dec = Decimal(value.numerator) / Decimal(value.denominator)
    else:
        dec = Decimal(repr(float(value)))
    return str(dec.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))
