"""Tables, the method registry, and the per-year verdict histogram.

Rendering is pure: the same inputs always produce byte-identical CSV,
Markdown, JSON, or SVG output.  Human-readable formats print reals in
3-significant-digit scientific notation; JSON keeps full precision.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass
from importlib import resources

from .audit import (
    CENTER_BIASED,
    AuditRecord,
    MethodReport,
    canonical_json,
)
from .errors import ConfigurationError

logger = logging.getLogger(__name__)

TABLE_FORMATS = ("csv", "markdown", "json")

_COLUMNS = ("method", "function", "unshifted_mean", "shifted_mean", "ratio", "verdict")


def _sci(x: float) -> str:
    return f"{x:.2E}"


def _table_rows(reports, records) -> list[tuple[str, ...]]:
    by_method: dict[str, list[AuditRecord]] = {}
    for r in records:
        by_method.setdefault(r.method, []).append(r)
    report_methods = {rep.method for rep in reports}
    if set(by_method) - report_methods:
        raise ValueError("records mention methods that have no report")
    rows = []
    for rep in reports:
        for rec in by_method.get(rep.method, []):
            rows.append(
                (rec.method, rec.function, _sci(rec.unshifted_mean),
                 _sci(rec.shifted_mean), _sci(rec.ratio), "")
            )
        rows.append((rep.method, "geomean", "", "", _sci(rep.geomean), rep.verdict))
    return rows


def render_table(reports, records, format: str = "csv") -> str:
    """One row per (method, function) plus a geomean summary row per method."""
    if format not in TABLE_FORMATS:
        raise ConfigurationError(f"unknown table format: {format!r}")
    if format == "json":
        return canonical_json(
            {
                "records": [
                    {
                        "method": r.method,
                        "function": r.function,
                        "unshifted_mean": r.unshifted_mean,
                        "shifted_mean": r.shifted_mean,
                        "ratio": r.ratio,
                    }
                    for r in records
                ],
                "reports": [
                    {"method": r.method, "geomean": r.geomean, "verdict": r.verdict}
                    for r in reports
                ],
            }
        )
    rows = _table_rows(reports, records)
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_COLUMNS)
        writer.writerows(rows)
        return buf.getvalue()
    header = "| " + " | ".join(_COLUMNS) + " |"
    rule = "|" + "|".join(" --- " for _ in _COLUMNS) + "|"
    lines = [header, rule]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def parse_table_json(text: str) -> tuple[tuple[MethodReport, ...], tuple[AuditRecord, ...]]:
    """Inverse of ``render_table(..., format="json")``."""
    doc = json.loads(text)
    records = tuple(
        AuditRecord(
            method=r["method"],
            function=r["function"],
            unshifted_mean=float(r["unshifted_mean"]),
            shifted_mean=float(r["shifted_mean"]),
            ratio=float(r["ratio"]),
        )
        for r in doc["records"]
    )
    reports = tuple(
        MethodReport(method=r["method"], geomean=float(r["geomean"]), verdict=r["verdict"])
        for r in doc["reports"]
    )
    return reports, records


# ---------------------------------------------------------------------------
# registry

@dataclass(frozen=True)
class RegistryEntry:
    """Method metadata: abbreviation, full name, publication year.

    Entries transcribed from published results may also carry the
    geomean and verdict reported there.
    """

    abbreviation: str
    full_name: str
    year: int
    paper_geomean: float | None = None
    paper_verdict: str | None = None

    def __post_init__(self):
        if not 1900 <= self.year <= 2100:
            raise ValueError(f"implausible year {self.year} for {self.abbreviation}")


def parse_registry(text: str) -> dict[str, RegistryEntry]:
    """Parse ``abbreviation,name,year[,geomean,verdict]`` lines."""
    entries: dict[str, RegistryEntry] = {}
    reader = csv.reader(io.StringIO(text))
    for row in reader:
        if not row or row[0].startswith("#") or row[0] == "abbreviation":
            continue
        if len(row) < 3:
            raise ValueError(f"registry row too short: {row!r}")
        abbr = row[0].strip()
        if abbr in entries:
            raise ValueError(f"duplicate registry abbreviation: {abbr}")
        entries[abbr] = RegistryEntry(
            abbreviation=abbr,
            full_name=row[1].strip(),
            year=int(row[2]),
            paper_geomean=float(row[3]) if len(row) > 3 and row[3] else None,
            paper_verdict=row[4].strip() if len(row) > 4 and row[4] else None,
        )
    return entries


def load_registry(path) -> dict[str, RegistryEntry]:
    with open(path, encoding="utf-8") as fh:
        return parse_registry(fh.read())


def load_builtin_registry() -> dict[str, RegistryEntry]:
    """The shipped transcription of 90 published method audits."""
    text = resources.files("centerbias").joinpath("data/method_registry.csv").read_text("utf-8")
    return parse_registry(text)


def builtin_reports() -> tuple[MethodReport, ...]:
    """Lightweight reports built from the shipped registry's verdict columns."""
    reports = []
    for entry in load_builtin_registry().values():
        if entry.paper_geomean is None or entry.paper_verdict is None:
            continue
        reports.append(
            MethodReport(
                method=entry.abbreviation,
                geomean=entry.paper_geomean,
                verdict=entry.paper_verdict,
            )
        )
    return tuple(reports)


# ---------------------------------------------------------------------------
# histogram

@dataclass(frozen=True)
class YearHistogram:
    """Per-year (biased, unbiased) method counts."""

    counts: dict[int, tuple[int, int]]

    def total_biased(self) -> int:
        return sum(b for b, _ in self.counts.values())

    def total_unbiased(self) -> int:
        return sum(u for _, u in self.counts.values())


def year_histogram(reports, registry: dict[str, RegistryEntry]) -> YearHistogram:
    """Count verdicts per publication year; unregistered methods are skipped."""
    counts: dict[int, tuple[int, int]] = {}
    for report in reports:
        entry = registry.get(report.method)
        if entry is None:
            logger.warning("method %s has no registry entry; skipping", report.method)
            continue
        biased, unbiased = counts.get(entry.year, (0, 0))
        if report.verdict == CENTER_BIASED:
            biased += 1
        else:
            unbiased += 1
        counts[entry.year] = (biased, unbiased)
    return YearHistogram(counts=counts)


_SVG_STYLE = (
    ".bar-biased{fill:#c0392b;}"
    ".bar-unbiased{fill:#7f8c8d;}"
    "text{font-family:sans-serif;font-size:10px;}"
)


def render_histogram_svg(histogram: YearHistogram) -> str:
    """Grouped-bar SVG, one biased/unbiased pair per year, gaps filled."""
    if not histogram.counts:
        raise ValueError("cannot render an empty histogram")
    years = list(range(min(histogram.counts), max(histogram.counts) + 1))
    peak = max(max(c) for c in histogram.counts.values())
    peak = max(peak, 1)
    bar_w = 8
    group_w = 2 * bar_w + 10
    plot_h = 160
    margin = 30
    width = margin * 2 + group_w * len(years)
    height = plot_h + 2 * margin
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f"<style>{_SVG_STYLE}</style>",
        f'<line x1="{margin}" y1="{margin + plot_h}" x2="{width - margin}" '
        f'y2="{margin + plot_h}" stroke="#333"/>',
    ]
    for i, year in enumerate(years):
        biased, unbiased = histogram.counts.get(year, (0, 0))
        x0 = margin + i * group_w
        for offset, count, cls in ((0, biased, "bar-biased"), (bar_w, unbiased, "bar-unbiased")):
            h = plot_h * count / peak
            y = margin + plot_h - h
            parts.append(
                f'<rect class="{cls}" x="{x0 + offset}" y="{y:.2f}" '
                f'width="{bar_w}" height="{h:.2f}"/>'
            )
        if len(years) <= 20 or year % 5 == 0:
            parts.append(
                f'<text x="{x0 + bar_w}" y="{margin + plot_h + 12}" '
                f'text-anchor="middle">{year}</text>'
            )
    parts.append(
        f'<text x="{margin}" y="{margin - 10}">methods per year '
        f"(red = center-biased, grey = not detected)</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_histogram_svg(histogram: YearHistogram, path) -> None:
    """Write the histogram SVG; identical input yields identical bytes."""
    svg = render_histogram_svg(histogram)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
