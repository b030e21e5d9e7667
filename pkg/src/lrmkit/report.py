"""Render a :class:`~lrmkit.corpus.MetricsReport` as JSON, CSV tables, or a text table."""

from __future__ import annotations

import csv
import io
import json
import sys
from os import PathLike
from pathlib import Path
from typing import Optional, TextIO, Union

from .corpus import MetricsReport
from .errors import ReportIOError

FORMATS = ("json", "csv", "table")
METRIC_ROWS = ("accuracy", "sm", "nm", "lrm_score")

Destination = Union[str, PathLike, TextIO, None]


def render_json(report: MetricsReport) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"


def render_table(report: MetricsReport) -> str:
    """Matching metrics per (type, time signature), one row each."""
    meta = report.metadata
    lines = [
        f"# lrmkit {meta['version']}  extractor={meta['extractor']}  nm={meta['nm_mode']}  "
        f"lexicon={meta['lexicon_version']}  songs={report.summary['songs']}",
        "Type | TS | Accuracy SM NM LRM-Score",
    ]
    for g in report.groups:
        cells = " ".join(g["display"][k] for k in METRIC_ROWS)
        lines.append(f"{g['kind'].capitalize()} | {g['timesig']} | {cells}")
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_tables(report: MetricsReport) -> dict[str, list[list]]:
    """File name -> rows (header first).  Every table is long-format and flat."""
    counts = [["kind", "timesig", "scope", "songs", "records", "ssb", "swb", "usb", "uwb"]]
    metrics = [["kind", "timesig", "metric", "value", "exact", "display", "error"]]
    dist = [["kind", "timesig", "view", "class", "bucket", "share"]]
    cond = [["kind", "timesig", "scope", "query", "value"]]
    points = [["kind", "timesig", "song_id", "weak_beats", "stressed_on_weak"]]
    fits = [["kind", "timesig", "n", "slope", "intercept", "r", "error"]]
    for g in report.groups:
        key = [g["kind"], g["timesig"]]
        for scope, c in g["confusion"].items():
            counts.append(key + [scope, g["songs"], g["records"], c["ssb"], c["swb"], c["usb"], c["uwb"]])
        for name in g["metrics"]:
            metrics.append(key + [name, g["metrics"][name], g["exact"][name], g["display"][name],
                                  g["errors"].get(name)])
        for view, table in (g["distribution"] or {}).items():
            if not isinstance(table, dict):
                continue
            for cls, buckets in table.items():
                for bucket, share in buckets.items():
                    dist.append(key + [view, cls, bucket, share])
        for scope, queries in g["conditional"].items():
            for expr, value in queries.items():
                cond.append(key + [scope, expr, value])
        reg = g["regression"]
        for p in reg["points"]:
            points.append(key + [p["song_id"], p["weak_beats"], p["stressed_on_weak"]])
        fit = reg["fit"] or {}
        fits.append(key + [fit.get("n"), fit.get("slope"), fit.get("intercept"), fit.get("r"), reg["error"]])

    song_cols = ["song_id", "title", "timesig", "words", "syllables", "keywords", "rake_yake_jaccard",
                 "fallback_words", "syllable_mismatches"]
    songs = [song_cols] + [[s[c] for c in song_cols] for s in report.songs]
    diag_cols = ["song", "severity", "code", "line", "column", "measure", "message"]
    diags = [diag_cols] + [[d.get(c) for c in diag_cols] for d in report.diagnostics]
    return {
        "counts.csv": counts,
        "metrics.csv": metrics,
        "distribution.csv": dist,
        "conditional.csv": cond,
        "regression_points.csv": points,
        "regression_fit.csv": fits,
        "songs.csv": songs,
        "diagnostics.csv": diags,
    }


def rows_to_csv(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _write_text(text: str, destination: Destination) -> Optional[Path]:
    if destination is None or destination == "-":
        sys.stdout.write(text)
        return None
    if hasattr(destination, "write"):
        destination.write(text)
        return None
    path = Path(destination)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc}") from exc
    return path


def emit(report: MetricsReport, fmt: str = "json", destination: Destination = None) -> list[Path]:
    """Write ``report``; csv needs a directory.  Returns the files written."""
    if fmt == "json":
        path = _write_text(render_json(report), destination)
        return [path] if path else []
    if fmt == "table":
        path = _write_text(render_table(report), destination)
        return [path] if path else []
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if destination is None or destination == "-" or hasattr(destination, "write"):
        raise ReportIOError("csv output needs a directory (--output DIR)")
    outdir = Path(destination)
    if outdir.exists() and not outdir.is_dir():
        raise ReportIOError(f"{outdir} is not a directory")
    written = []
    for name, rows in csv_tables(report).items():
        written.append(_write_text(rows_to_csv(rows), outdir / name))
    return written
