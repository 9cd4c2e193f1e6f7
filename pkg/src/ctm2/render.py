"""Deterministic SVG and markdown rendering of analysis reports.

Renderers are pure functions of (report, options): identical inputs yield
byte-identical output, which is what the golden-file tests pin. No value is
recomputed here; every MIL or count drawn comes straight off the report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

from ctm2.errors import UnknownIdError
from ctm2.analysis import ComparisonMatrix, GapReport, RadarReport, RingReport
from ctm2.scoring import Scorecard

STATE_ORDER = ("full", "partial", "none", "not_assessed")

DEFAULT_STATE_COLORS = {
    "full": "#2e8b57",
    "partial": "#e0a100",
    "none": "#c0392b",
    "not_assessed": "#9e9e9e",
}

DEFAULT_SERIES_COLORS = (
    "#1f6fb2", "#c0392b", "#2e8b57", "#8e44ad",
    "#e07b00", "#16837d", "#b03a6b", "#5d6d1e",
)


@dataclass(frozen=True)
class RenderOptions:
    width: int = 800
    height: int = 800
    state_colors: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_STATE_COLORS))
    series_colors: tuple[str, ...] = DEFAULT_SERIES_COLORS
    legend: bool = True
    sort_series: str = "none"  # "none" | "by-name"

    def __post_init__(self):
        if self.width < 100 or self.height < 100:
            raise ValueError("width and height must be at least 100")
        missing = set(STATE_ORDER) - set(self.state_colors)
        if missing:
            raise ValueError(f"state_colors missing {sorted(missing)}")
        if self.sort_series not in ("none", "by-name"):
            raise ValueError(f"unknown sort_series '{self.sort_series}'")


def _fmt(value: float) -> str:
    """Fixed-point coordinate formatting so output bytes are stable."""
    text = f"{value:.3f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _svg_open(width: int, height: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
    ]


def _text(x: float, y: float, content: str, cls: str, anchor: str = "middle",
          size: int = 14) -> str:
    return (f'<text class="{cls}" x="{_fmt(x)}" y="{_fmt(y)}" '
            f'text-anchor="{anchor}" font-family="sans-serif" '
            f'font-size="{size}">{escape(content)}</text>')


def render_radar_svg(report: RadarReport, options: RenderOptions | None = None) -> bytes:
    """Radial MIL chart: one axis per domain, one closed polygon per testbed.

    Axes start at 12 o'clock and proceed clockwise in catalog domain order;
    the radial scale runs 0..max_level with a gridline per integer MIL.
    """
    opts = options or RenderOptions()
    w, h = opts.width, opts.height
    cx, cy = w / 2, h / 2
    radius = 0.38 * min(w, h)
    n = len(report.domains)
    max_level = report.max_level

    def point(index: int, mil: float) -> tuple[float, float]:
        angle = -math.pi / 2 + 2 * math.pi * index / n
        r = radius * mil / max_level
        return cx + r * math.cos(angle), cy + r * math.sin(angle)

    lines = _svg_open(w, h)
    lines.append(f'<title>{escape("MIL radar: " + report.model_id)}</title>')

    # Integer gridlines 0..max_level (the 0 ring is the center point).
    for mil in range(0, max_level + 1):
        r = radius * mil / max_level
        lines.append(f'<circle class="gridline" cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
                     f'r="{_fmt(r)}" fill="none" stroke="#cccccc"/>')
        lines.append(_text(cx + 6, cy - r - 4, str(mil), "gridline-label",
                           anchor="start", size=11))

    for i, domain_id in enumerate(report.domains):
        x, y = point(i, max_level)
        lines.append(f'<line class="axis" x1="{_fmt(cx)}" y1="{_fmt(cy)}" '
                     f'x2="{_fmt(x)}" y2="{_fmt(y)}" stroke="#888888"/>')
        lx, ly = point(i, max_level * 1.12)
        lines.append(_text(lx, ly + 5, domain_id, "axis-label", size=15))

    entries = list(report.entries)
    if opts.sort_series == "by-name":
        entries.sort(key=lambda e: e.name)
    for idx, entry in enumerate(entries):
        color = opts.series_colors[idx % len(opts.series_colors)]
        pts = " ".join(
            f"{_fmt(px)},{_fmt(py)}"
            for px, py in (point(i, mil) for i, mil in enumerate(entry.mils)))
        lines.append(f'<polygon class="series" data-assessment={quoteattr(entry.assessment_id)} '
                     f'points="{pts}" fill="{color}" fill-opacity="0.12" '
                     f'stroke="{color}" stroke-width="2"/>')

    if opts.legend:
        for idx, entry in enumerate(entries):
            color = opts.series_colors[idx % len(opts.series_colors)]
            y = 24 + idx * 20
            lines.append(f'<rect class="legend-swatch" x="16" y="{_fmt(y - 11)}" '
                         f'width="14" height="14" fill="{color}"/>')
            lines.append(_text(36, y, entry.name, "legend-label", anchor="start", size=13))

    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _annular_segment(cx: float, cy: float, r_in: float, r_out: float,
                     start_deg: float, extent_deg: float) -> str:
    """Path data for a clockwise annular sector starting at ``start_deg``."""
    if extent_deg >= 360.0 - 1e-9:
        # A single arc cannot span the full circle; use two half turns.
        top_o = (cx, cy - r_out)
        bottom_o = (cx, cy + r_out)
        top_i = (cx, cy - r_in)
        bottom_i = (cx, cy + r_in)
        return (
            f"M {_fmt(top_o[0])} {_fmt(top_o[1])} "
            f"A {_fmt(r_out)} {_fmt(r_out)} 0 1 1 {_fmt(bottom_o[0])} {_fmt(bottom_o[1])} "
            f"A {_fmt(r_out)} {_fmt(r_out)} 0 1 1 {_fmt(top_o[0])} {_fmt(top_o[1])} Z "
            f"M {_fmt(top_i[0])} {_fmt(top_i[1])} "
            f"A {_fmt(r_in)} {_fmt(r_in)} 0 1 0 {_fmt(bottom_i[0])} {_fmt(bottom_i[1])} "
            f"A {_fmt(r_in)} {_fmt(r_in)} 0 1 0 {_fmt(top_i[0])} {_fmt(top_i[1])} Z"
        )
    a0 = math.radians(start_deg - 90.0)
    a1 = math.radians(start_deg + extent_deg - 90.0)
    large = 1 if extent_deg > 180.0 else 0
    x0o, y0o = cx + r_out * math.cos(a0), cy + r_out * math.sin(a0)
    x1o, y1o = cx + r_out * math.cos(a1), cy + r_out * math.sin(a1)
    x0i, y0i = cx + r_in * math.cos(a0), cy + r_in * math.sin(a0)
    x1i, y1i = cx + r_in * math.cos(a1), cy + r_in * math.sin(a1)
    return (
        f"M {_fmt(x0o)} {_fmt(y0o)} "
        f"A {_fmt(r_out)} {_fmt(r_out)} 0 {large} 1 {_fmt(x1o)} {_fmt(y1o)} "
        f"L {_fmt(x1i)} {_fmt(y1i)} "
        f"A {_fmt(r_in)} {_fmt(r_in)} 0 {large} 0 {_fmt(x0i)} {_fmt(y0i)} Z"
    )


def render_ring_svg(report: RingReport, domain_id: str,
                    options: RenderOptions | None = None) -> bytes:
    """Concentric ring chart for one domain of a single-testbed report.

    MIL1 is the innermost annulus. The number inside each annulus is the
    cumulative criterion total for that level; the colored arcs split the
    annulus proportionally to the cumulative implementation-state counts,
    clockwise from 12 o'clock in the order full, partial, none,
    not assessed. Each arc carries its angular extent in ``data-angle``
    (degrees, full float precision) so consumers never re-derive geometry.
    """
    opts = options or RenderOptions()
    try:
        domain = report.domain(domain_id)
    except KeyError:
        raise UnknownIdError(f"domain '{domain_id}' not present in ring report") from None

    w, h = opts.width, opts.height
    cx, cy = w / 2, h / 2
    outer = 0.40 * min(w, h)
    hole = 0.18 * outer
    thickness = (outer - hole) / max(len(domain.levels), 1)

    lines = _svg_open(w, h)
    lines.append(f'<title>{escape(f"Ring analysis: {report.assessment_id} / {domain_id}")}</title>')
    lines.append(_text(cx, 30, f"{domain_id} (MIL {domain.achieved_mil})",
                       "title-label", size=18))

    for ring_level in domain.levels:
        idx = ring_level.level - 1
        r_in = hole + idx * thickness
        r_out = hole + (idx + 1) * thickness - 2.0  # 2px gap between annuli
        counts = ring_level.cumulative_states
        total = ring_level.cumulative_total
        if total == 0:
            lines.append(
                f'<path class="segment empty" data-level="{ring_level.level}" '
                f'data-state="empty" data-angle="{360.0!r}" '
                f'd="{_annular_segment(cx, cy, r_in, r_out, 0.0, 360.0)}" '
                f'fill="#f0f0f0" stroke="#ffffff"/>')
        else:
            start = 0.0
            for state in STATE_ORDER:
                count = getattr(counts, state)
                if count == 0:
                    continue
                extent = count / total * 360.0
                lines.append(
                    f'<path class="segment {state}" data-level="{ring_level.level}" '
                    f'data-state="{state}" data-angle="{extent!r}" '
                    f'd="{_annular_segment(cx, cy, r_in, r_out, start, extent)}" '
                    f'fill="{opts.state_colors[state]}" stroke="#ffffff"/>')
                start += extent
        # Cumulative total label, pinned below center inside the annulus.
        label_r = (r_in + r_out) / 2
        lines.append(_text(cx, cy + label_r + 5, str(ring_level.cumulative_total),
                           "ring-total", size=14))
        lines.append(_text(cx - outer - 10, cy - (r_in + r_out) / 2 + 4,
                           f"MIL{ring_level.level}", "level-label",
                           anchor="end", size=12))

    if opts.legend:
        for idx, state in enumerate(STATE_ORDER):
            y = h - 24 - (len(STATE_ORDER) - 1 - idx) * 20
            lines.append(f'<rect class="legend-swatch" x="16" y="{_fmt(y - 11)}" '
                         f'width="14" height="14" fill="{opts.state_colors[state]}"/>')
            lines.append(_text(36, y, state.replace("_", " "), "legend-label",
                               anchor="start", size=13))

    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


# --- markdown ----------------------------------------------------------

def _md_table(header: list[str], rows: list[list[str]]) -> list[str]:
    out = ["| " + " | ".join(header) + " |",
           "| " + " | ".join("---" for _ in header) + " |"]
    out.extend("| " + " | ".join(row) + " |" for row in rows)
    return out


def _scorecard_markdown(card: Scorecard) -> str:
    lines = [f"# Scorecard: {card.assessment_id}", "",
             f"Policy: {card.policy.value}", ""]
    rows = []
    for d in card.domains:
        blocking = str(d.blocking_level) if d.blocking_level is not None else "-"
        satisfied = sum(t.satisfied for t in d.per_level.values())
        introduced = sum(t.introduced for t in d.per_level.values())
        rows.append([d.domain_id, str(d.achieved_mil), blocking,
                     f"{satisfied}/{introduced}"])
    lines.extend(_md_table(["Domain", "MIL", "Blocking level", "Satisfied"], rows))
    if card.warnings:
        lines.append("")
        lines.extend(f"- Warning: {w}" for w in card.warnings)
    return "\n".join(lines) + "\n"


def _matrix_markdown(matrix: ComparisonMatrix) -> str:
    lines = [f"# Comparison: {matrix.model_id}", "",
             f"Policy: {matrix.policy.value}", ""]
    header = ["Testbed", "Institute", "Sector"] + list(matrix.domains)
    rows = [
        [r.name, r.institute, r.sector] + [str(m) for m in r.mils]
        for r in matrix.rows
    ]
    lines.extend(_md_table(header, rows))
    return "\n".join(lines) + "\n"


def _gap_markdown(report: GapReport) -> str:
    lines = [f"# Gap analysis: {report.assessment_id}", "",
             f"Policy: {report.policy.value}", ""]
    for d in report.domains:
        if d.target_level is None:
            lines.append(f"## {d.domain_id} (MIL {d.achieved_mil})")
            lines.append("")
            lines.append("No blocking criteria — maximum MIL achieved.")
            lines.append("")
            continue
        lines.append(f"## {d.domain_id} (MIL {d.achieved_mil}, target {d.target_level})")
        lines.append("")
        rows = [[b.criterion_id, b.state.value, b.text] for b in d.blocking]
        lines.extend(_md_table(["Criterion", "State", "Text"], rows))
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


def render_markdown(report: Scorecard | ComparisonMatrix | GapReport) -> str:
    """Tabular markdown for a scorecard, comparison matrix or gap report."""
    if isinstance(report, Scorecard):
        return _scorecard_markdown(report)
    if isinstance(report, ComparisonMatrix):
        return _matrix_markdown(report)
    if isinstance(report, GapReport):
        return _gap_markdown(report)
    raise TypeError(f"cannot render {type(report).__name__} as markdown")
