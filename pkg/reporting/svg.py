"""
reporting/svg.py — Static SVG renderings of report data.

Templates are plain f-strings; every coordinate is formatted to one decimal so
identical data always renders to identical bytes.
"""
from __future__ import annotations

import html as _html
import math

from analysis.constants import LABEL_COLORS
from analysis.pairs import MetroSummary
from config import METRICS_BY_ID, SERIES_COLORS
from reporting.names import isp_label
from stats.difference import PainMode, pain_score

FONT = "-apple-system, BlinkMacSystemFont, 'Segoe UI', sans-serif"
MODE_AXIS = {"ks": "pain = 10 × KS distance", "spread": "pain = folded geometric-mean ratio"}


def _esc(text) -> str:
    return _html.escape(str(text), quote=True)


def _f(v: float) -> str:
    return f"{v:.1f}"


def _document(width: int, height: int, body: str, title: str) -> str:
    return f"""<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="{_esc(FONT)}">
<title>{_esc(title)}</title>
<rect width="{width}" height="{height}" fill="#ffffff"/>
{body}
</svg>
"""


# ── Metro bar chart ───────────────────────────────────────────────────────────

def render_bars(summaries: list[MetroSummary], metric: str, mode: PainMode,
                *, threshold: float | None = None, asn_names: dict[int, str] | None = None) -> str:
    """One bar per metro, height = worst pain, tallest first.

    Each bar is annotated with the ISP and server pair responsible for it.
    """
    names = asn_names or {}
    bars = []
    for s in summaries:
        worst = s.worst_pair(metric, mode)
        if worst is not None:
            bars.append((pain_score(worst.stat, mode), s.metro, worst))
    bars.sort(key=lambda b: (-b[0], b[1]))

    label = METRICS_BY_ID.get(metric, {}).get("label", metric)
    title = f"Worst-case {label} difference per metro ({mode})"
    left, top, bottom, step, bar_w = 70, 50, 110, 90, 50
    width = max(left + step * len(bars) + 40, 400)
    height = 440
    plot_h = height - top - bottom
    base_y = top + plot_h

    if not bars:
        body = f'<text x="{width // 2}" y="{height // 2}" text-anchor="middle" font-size="14" fill="#64748b">no metro has an eligible pair for {_esc(metric)}</text>'
        return _document(width, height, body, title)

    y_max = max([b[0] for b in bars] + [threshold or 0.0]) * 1.1 or 1.0

    def _y(v: float) -> float:
        return base_y - plot_h * v / y_max

    parts = [
        f'<text x="{left}" y="24" font-size="15" font-weight="600" fill="#0f172a">{_esc(title)}</text>',
        f'<text x="16" y="{_f(top + plot_h / 2)}" font-size="11" fill="#475569" transform="rotate(-90 16 {_f(top + plot_h / 2)})" text-anchor="middle">{_esc(MODE_AXIS[mode])}</text>',
        f'<line x1="{left}" y1="{base_y}" x2="{width - 20}" y2="{base_y}" stroke="#334155"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{base_y}" stroke="#334155"/>',
    ]
    for k in range(5):
        v = y_max * k / 4
        parts.append(f'<text x="{left - 6}" y="{_f(_y(v) + 4)}" font-size="10" text-anchor="end" fill="#475569">{v:.2f}</text>')
    if threshold is not None:
        parts.append(f'<line x1="{left}" y1="{_f(_y(threshold))}" x2="{width - 20}" y2="{_f(_y(threshold))}" stroke="#94a3b8" stroke-dasharray="4 3"/>')
        parts.append(f'<text x="{width - 22}" y="{_f(_y(threshold) - 4)}" font-size="10" text-anchor="end" fill="#64748b">flag threshold {threshold:g}</text>')

    for k, (pain, metro, worst) in enumerate(bars):
        x = left + 20 + step * k
        y = _y(pain)
        color = LABEL_COLORS.get(worst.label, "#64748b")
        note = f"{isp_label(worst.client_asn, names)}: {worst.server_a} vs {worst.server_b}"
        parts.append(
            f'<g><title>{_esc(metro)} · {_esc(note)} · pain {pain:.3f} ({_esc(worst.label)})</title>'
            f'<rect x="{x}" y="{_f(y)}" width="{bar_w}" height="{_f(base_y - y)}" fill="{color}"/></g>'
        )
        parts.append(f'<text x="{x + bar_w // 2}" y="{_f(y - 6)}" font-size="10" text-anchor="middle" fill="#0f172a">{pain:.2f}</text>')
        parts.append(f'<text x="{x + bar_w // 2}" y="{base_y + 16}" font-size="12" font-weight="600" text-anchor="middle" fill="#0f172a">{_esc(metro)}</text>')
        parts.append(f'<text x="{x + bar_w // 2}" y="{base_y + 32}" font-size="9" text-anchor="middle" fill="#475569">AS{worst.client_asn}</text>')
        parts.append(f'<text x="{x + bar_w // 2}" y="{base_y + 45}" font-size="9" text-anchor="middle" fill="#475569">{_esc(worst.server_a)}</text>')
        parts.append(f'<text x="{x + bar_w // 2}" y="{base_y + 58}" font-size="9" text-anchor="middle" fill="#475569">{_esc(worst.server_b)}</text>')

    return _document(width, height, "\n".join(parts), title)


# ── Per-ISP distribution overlay ──────────────────────────────────────────────

def render_distribution(doc: dict) -> str:
    """Density curves of one ISP toward each eligible server on a log x axis."""
    title = f"{doc['isp']} · {doc['metro']} · {doc['metric']}"
    width, height = 760, 460
    left, right, top = 60, 20, 50
    omitted = doc.get("omitted", [])
    legend_h = 16 * len(doc["series"])
    foot_h = 16 * (len(omitted) + 1) if omitted else 0
    plot_bottom = height - 50 - legend_h - foot_h
    plot_h = max(plot_bottom - top, 80)
    plot_w = width - left - right

    if not doc["series"]:
        body = f'<text x="{width // 2}" y="{height // 2}" text-anchor="middle" font-size="14" fill="#64748b">{_esc(doc.get("note") or "no data")}</text>'
        return _document(width, height, body, title)

    xs = [x for s in doc["series"] for x in s["x"]]
    lo = math.floor(math.log10(min(xs)))
    hi = math.ceil(math.log10(max(xs)))
    if hi == lo:
        hi += 1
    y_max = max(max(s["density"]) for s in doc["series"]) * 1.1 or 1.0

    def _px(x: float) -> float:
        return left + plot_w * (math.log10(x) - lo) / (hi - lo)

    def _py(d: float) -> float:
        return top + plot_h - plot_h * d / y_max

    base_y = top + plot_h
    unit = doc.get("unit") or ""
    parts = [
        f'<text x="{left}" y="24" font-size="15" font-weight="600" fill="#0f172a">{_esc(title)}</text>',
        f'<line x1="{left}" y1="{_f(base_y)}" x2="{width - right}" y2="{_f(base_y)}" stroke="#334155"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{_f(base_y)}" stroke="#334155"/>',
        f'<text x="{left + plot_w // 2}" y="{_f(base_y + 32)}" font-size="11" text-anchor="middle" fill="#475569">{_esc(doc["metric"])} {f"({_esc(unit)}, log scale)" if unit else "(log scale)"}</text>',
    ]
    for k in range(lo, hi + 1):
        x = _px(10.0 ** k)
        parts.append(f'<line x1="{_f(x)}" y1="{_f(base_y)}" x2="{_f(x)}" y2="{top}" stroke="#e2e8f0"/>')
        parts.append(f'<text x="{_f(x)}" y="{_f(base_y + 14)}" font-size="10" text-anchor="middle" fill="#475569">{10.0 ** k:g}</text>')

    for k, s in enumerate(doc["series"]):
        color = SERIES_COLORS[k % len(SERIES_COLORS)]
        points = " ".join(f"{_f(_px(x))},{_f(_py(d))}" for x, d in zip(s["x"], s["density"]))
        parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.6"/>')
        ly = base_y + 50 + 16 * k
        parts.append(f'<rect x="{left}" y="{_f(ly - 9)}" width="12" height="3" fill="{color}"/>')
        parts.append(f'<text x="{left + 18}" y="{_f(ly)}" font-size="11" fill="#0f172a">{_esc(s["label"])}</text>')

    if omitted:
        fy = base_y + 50 + legend_h + 8
        parts.append(f'<text x="{left}" y="{_f(fy)}" font-size="10" font-style="italic" fill="#64748b">Omitted below the sample gate:</text>')
        for k, o in enumerate(omitted):
            parts.append(f'<text x="{left + 12}" y="{_f(fy + 16 * (k + 1))}" font-size="10" fill="#64748b">{_esc(o["server_id"])} (n={o["n"]:,})</text>')

    return _document(width, height, "\n".join(parts), title)
