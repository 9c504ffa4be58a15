"""Deterministic renderers: metric tables, correlation tables, SVG scatter
plots, and the dataset manifest.

Every renderer returns a string with "\\n" line endings and fixed decimal
formatting, so identical inputs give byte-identical files on any platform.
Each report embeds a configuration echo; reports produced under different
settings can never be byte-identical.
"""

from __future__ import annotations

from .ingest import DatasetManifest, RatingsTable
from .metrics import METRICS, EpisodeMetrics
from .stats import CorrelationReport

# metric files put Active_Nodes last; correlation tables keep it first
CSV_METRIC_ORDER = METRICS[1:] + (METRICS[0],)

METRICS_CSV_HEADER = ["Episode", "Review"] + [column.header for column in CSV_METRIC_ORDER]

SVG_WIDTH = 800
SVG_HEIGHT = 600
SVG_MARGIN = {"left": 80.0, "right": 30.0, "top": 60.0, "bottom": 70.0}
AXIS_PAD = 0.05  # fraction of the data span added on each side


def fmt_real(value: float) -> str:
    return f"{value:.3f}"


def _cell(row: EpisodeMetrics, column) -> str:
    value = getattr(row, column.attr)
    return str(int(value)) if column.integer else fmt_real(value)


def _metric_rows(rows: list[EpisodeMetrics], ratings: RatingsTable) -> list[list[str]]:
    rendered = []
    for row in sorted(rows, key=lambda r: r.key):
        review = ratings.get(row.key)
        cells = [str(row.ordinal), "" if review is None else fmt_real(review)]
        cells.extend(_cell(row, column) for column in CSV_METRIC_ORDER)
        rendered.append(cells)
    return rendered


def render_metrics_csv(
    rows: list[EpisodeMetrics], ratings: RatingsTable, echo: list[str]
) -> str:
    """One CSV row per episode, fixed column order, 3-decimal reals."""
    lines = [",".join(METRICS_CSV_HEADER)]
    lines.extend(",".join(cells) for cells in _metric_rows(rows, ratings))
    lines.extend(f"# {line}" for line in echo)
    return "\n".join(lines) + "\n"


def render_metrics_markdown(
    rows: list[EpisodeMetrics], ratings: RatingsTable, echo: list[str]
) -> str:
    """Pipe-table mirror of the metrics CSV."""
    lines = [
        "| " + " | ".join(METRICS_CSV_HEADER) + " |",
        "|" + "|".join(["---"] * len(METRICS_CSV_HEADER)) + "|",
    ]
    for cells in _metric_rows(rows, ratings):
        lines.append("| " + " | ".join(cells) + " |")
    lines.append("")
    lines.extend(f"_{line}_" for line in echo)
    return "\n".join(lines) + "\n"


def _correlation_cells(report: CorrelationReport) -> list[list[str]]:
    rendered = []
    for result in report.results:
        if result.rho is None or result.p_value is None:
            rendered.append([result.metric_name, "", "", ""])
        else:
            rendered.append(
                [
                    result.metric_name,
                    fmt_real(result.rho),
                    fmt_real(result.p_value),
                    result.significance,
                ]
            )
    return rendered


def _correlation_footer(report: CorrelationReport, echo: list[str]) -> list[str]:
    lines = [
        f"n: {report.n}",
        f"excluded (no rating): {report.excluded}",
        f"duplicate episodes dropped at load: {report.dedup_dropped}",
        f"efficiency mode: {report.efficiency_mode}",
        f"std convention: {report.std_convention}",
        "stars: ** p < 0.01, * p < 0.05 (strict thresholds, no exceptions)",
    ]
    for result in report.results:
        if result.note:
            lines.append(f"flagged {result.metric_name}: {result.note}")
    for result in report.results:
        if result.permutation_p is not None:
            lines.append(
                f"permutation pValue {result.metric_name}: {fmt_real(result.permutation_p)}"
            )
    lines.extend(echo)
    return lines


def render_correlations_csv(report: CorrelationReport, echo: list[str] | None = None) -> str:
    lines = ["Metric,Correlation,pValue,Stars"]
    lines.extend(",".join(cells) for cells in _correlation_cells(report))
    lines.extend(f"# {line}" for line in _correlation_footer(report, echo or []))
    return "\n".join(lines) + "\n"


def render_correlations_markdown(
    report: CorrelationReport, echo: list[str] | None = None
) -> str:
    lines = [
        "| Metric | Correlation | pValue | Stars |",
        "|---|---|---|---|",
    ]
    for cells in _correlation_cells(report):
        lines.append("| " + " | ".join(cells) + " |")
    lines.append("")
    lines.extend(f"_{line}_" for line in _correlation_footer(report, echo or []))
    return "\n".join(lines) + "\n"


def _axis_range(values: list[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        # degenerate span: fall back to a half-unit pad on each side
        lo -= 0.5
        hi += 0.5
    pad = AXIS_PAD * (hi - lo)
    return lo - pad, hi + pad


def render_scatter_svg(
    points: list[tuple[float, float]],
    metric_label: str,
    series_label: str,
    echo: list[str],
) -> str:
    """Standalone scatter plot: metric on x, review on y, one circle per episode."""
    left = SVG_MARGIN["left"]
    top = SVG_MARGIN["top"]
    plot_w = SVG_WIDTH - left - SVG_MARGIN["right"]
    plot_h = SVG_HEIGHT - top - SVG_MARGIN["bottom"]

    x_lo, x_hi = _axis_range([x for x, _ in points])
    y_lo, y_hi = _axis_range([y for _, y in points])

    def sx(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return top + (y_hi - y) / (y_hi - y_lo) * plot_h

    title = f"{metric_label} vs Review for {series_label}"
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}"'
        f' width="{SVG_WIDTH}" height="{SVG_HEIGHT}">',
        f"<!-- {'; '.join(echo)} -->",
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="#ffffff"/>',
        f'<text x="{SVG_WIDTH / 2:.2f}" y="30" text-anchor="middle"'
        f' font-family="sans-serif" font-size="18">{title}</text>',
        f'<line x1="{left:.2f}" y1="{top + plot_h:.2f}" x2="{left + plot_w:.2f}"'
        f' y2="{top + plot_h:.2f}" stroke="#333333" stroke-width="1"/>',
        f'<line x1="{left:.2f}" y1="{top:.2f}" x2="{left:.2f}"'
        f' y2="{top + plot_h:.2f}" stroke="#333333" stroke-width="1"/>',
    ]
    for i in range(5):
        frac = i / 4.0
        x_val = x_lo + frac * (x_hi - x_lo)
        px = sx(x_val)
        lines.append(
            f'<line x1="{px:.2f}" y1="{top + plot_h:.2f}" x2="{px:.2f}"'
            f' y2="{top + plot_h + 6:.2f}" stroke="#333333" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{px:.2f}" y="{top + plot_h + 22:.2f}" text-anchor="middle"'
            f' font-family="sans-serif" font-size="12">{fmt_real(x_val)}</text>'
        )
        y_val = y_lo + frac * (y_hi - y_lo)
        py = sy(y_val)
        lines.append(
            f'<line x1="{left - 6:.2f}" y1="{py:.2f}" x2="{left:.2f}"'
            f' y2="{py:.2f}" stroke="#333333" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{left - 10:.2f}" y="{py + 4:.2f}" text-anchor="end"'
            f' font-family="sans-serif" font-size="12">{fmt_real(y_val)}</text>'
        )
    lines.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{SVG_HEIGHT - 18:.2f}" text-anchor="middle"'
        f' font-family="sans-serif" font-size="14">{metric_label}</text>'
    )
    lines.append(
        f'<text x="22" y="{top + plot_h / 2:.2f}" text-anchor="middle"'
        f' font-family="sans-serif" font-size="14"'
        f' transform="rotate(-90 22 {top + plot_h / 2:.2f})">Review</text>'
    )
    for x, y in points:
        lines.append(
            f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4" fill="#1f6fb2"'
            f' fill-opacity="0.8"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_manifest(manifest: DatasetManifest) -> str:
    """Per-episode counts and warnings in key order."""
    lines = []
    for entry in manifest.entries:
        lines.append(
            f"{entry.key}: {entry.segment_count} segments,"
            f" {entry.node_count} nodes, {entry.edge_count} edges"
        )
        lines.extend(f"  warning: {w}" for w in entry.warnings)
    lines.extend(f"warning: {w}" for w in manifest.dataset_warnings)
    lines.append(
        f"episodes: {len(manifest.entries)}, warnings: {manifest.warning_count()}"
    )
    return "\n".join(lines) + "\n"
