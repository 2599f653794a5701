"""reporting package — summaries, plot data and static charts."""
from reporting.bundle import (
    ReportBundle,
    build_bundle,
    emit_plot_data,
    emit_summary,
    summary_document,
    write_report,
)
from reporting.names import isp_label, load_asn_names, names_path_for, write_asn_names
from reporting.svg import render_bars, render_distribution

__all__ = [
    "ReportBundle", "build_bundle", "emit_plot_data", "emit_summary", "summary_document",
    "write_report", "isp_label", "load_asn_names", "names_path_for", "render_bars", "render_distribution",
    "write_asn_names",
]
