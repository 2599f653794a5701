"""
reporting/figures.py — Standalone plotly HTML for the per-ISP distribution overlay.
"""
from __future__ import annotations

from pathlib import Path

import plotly.graph_objects as go

from config import SERIES_COLORS

DIV_ID = "midpath-distribution"


def _hex_to_rgba(hex_color: str, alpha: float) -> str:
    h = hex_color.lstrip("#")
    r, g, b = int(h[0:2], 16), int(h[2:4], 16), int(h[4:6], 16)
    return f"rgba({r},{g},{b},{alpha})"


def distribution_figure(doc: dict, cumulative: bool = False) -> go.Figure:
    """Density (or cumulative) curves from an ``emit_plot_data`` document."""
    fig = go.Figure()
    for k, s in enumerate(doc["series"]):
        color = SERIES_COLORS[k % len(SERIES_COLORS)]
        fig.add_trace(go.Scatter(
            x             = s["x"],
            y             = s["cumulative"] if cumulative else s["density"],
            mode          = "lines",
            name          = s["label"],
            line          = dict(color=color, width=2, shape="hvh"),
            fill          = None if cumulative else "tozeroy",
            fillcolor     = _hex_to_rgba(color, 0.08),
            hovertemplate = "%{x:.3g}: %{y:.4f}<extra>" + s["server_id"] + "</extra>",
        ))

    unit = doc.get("unit") or ""
    note = ""
    if doc.get("omitted"):
        note = "Omitted below the sample gate: " + ", ".join(
            f"{o['server_id']} (n={o['n']:,})" for o in doc["omitted"])
    fig.update_layout(
        title       = f"{doc['isp']} · {doc['metro']} · {doc['metric']}",
        xaxis       = dict(type="log", title=f"{doc['metric']} ({unit})" if unit else doc["metric"]),
        yaxis       = dict(title="cumulative fraction" if cumulative else "fraction of tests"),
        legend      = dict(orientation="h", y=-0.2),
        margin      = dict(l=60, r=20, t=60, b=120),
        height      = 520,
        annotations = [dict(text=note or doc.get("note", ""), showarrow=False, xref="paper",
                            yref="paper", x=0, y=-0.38, xanchor="left", font=dict(size=10))],
    )
    return fig


def write_html(doc: dict, path: str | Path, cumulative: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    html = distribution_figure(doc, cumulative).to_html(
        full_html=True, include_plotlyjs="cdn", div_id=DIV_ID)
    with open(path, "w", encoding="utf-8") as f:
        f.write(html)
    return path
