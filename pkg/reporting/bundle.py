"""
reporting/bundle.py — Report bundle and its serialized forms.

Output tree (all paths relative to the report directory):

    summary.json                          canonical machine-readable report
    summary.csv                           one row per (metro, metric) worst case
    pairs.csv                             every PairResult
    skipped.csv                           cells that failed the sample gate
    calibration.csv                       per-server calibration verdicts
    ingest.json                           ingest counters
    bars_<metric>_<mode>.svg              worst pain per metro
    metro/<metro>/<asn>/<metric>.json     per-server distribution overlay data
    metro/<metro>/<asn>/<metric>.svg      the same overlay rendered

Everything is ordered deterministically; identical inputs give identical bytes.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from analysis.pairs import (
    AnalysisConfig,
    Comparisons,
    MetroSummary,
    PairResult,
    ServerCalibration,
    SkippedCell,
    calibration_check,
    known_servers,
    metro_summaries,
    top_isps,
)
from config import METRICS_BY_ID, PAIN_KS_SCALE, REPORT_SCHEMA_VERSION
from histogram.sparse import CellKey, SparseHistogram
from reporting.names import isp_label, load_asn_names
from reporting.svg import render_bars, render_distribution
from stats.difference import PAIN_MODES

PAIR_COLUMNS = [
    "metro", "client_asn", "server_a", "server_b", "metric",
    "ks_distance", "spread", "spread_folded", "pain_ks", "n_a", "n_b", "truncated",
    "pain", "flagged", "label", "suspect",
]
SKIPPED_COLUMNS = ["metro", "client_asn", "server_id", "metric", "n", "reason"]
CALIBRATION_COLUMNS = ["metro", "server_id", "flag", "best_ks", "pairs"]
SUMMARY_COLUMNS = [
    "metro", "metric", "server_count", "eligible_isps", "pain_mode", "worst_pain",
    "worst_client_asn", "worst_server_a", "worst_server_b", "worst_ks_distance",
    "worst_spread_folded", "worst_label",
]


# ── Bundle ────────────────────────────────────────────────────────────────────

@dataclass(slots=True)
class ReportBundle:
    metadata: dict
    config: AnalysisConfig
    hist: SparseHistogram
    summaries: list[MetroSummary] = field(default_factory=list)
    results: list[PairResult] = field(default_factory=list)
    skipped: list[SkippedCell] = field(default_factory=list)
    calibration: list[ServerCalibration] = field(default_factory=list)
    asn_names: dict[int, str] = field(default_factory=dict)

    def plot_keys(self) -> list[tuple[str, int, str]]:
        """(metro, client_asn, metric) for every top ISP with at least one eligible cell."""
        keys = []
        for metro in self.hist.metros():
            servers = self.hist.servers(metro)
            for asn in top_isps(self.hist, metro, self.config.top_n_isps):
                for metric in self.config.metrics:
                    if any(self.hist.totals.get(CellKey(metro, s, asn, metric), 0)
                           >= self.config.min_samples_per_cell for s in servers):
                        keys.append((metro, asn, metric))
        return sorted(keys)


def build_bundle(hist: SparseHistogram, comparisons: Comparisons, config: AnalysisConfig,
                 metadata: dict | None = None, asn_names: dict[int, str] | None = None) -> ReportBundle:
    servers = known_servers(hist)
    calibration = calibration_check(comparisons.results, config, servers)
    summaries = metro_summaries(comparisons.results, config, servers, calibration)
    return ReportBundle(
        metadata=dict(metadata or {}),
        config=config,
        hist=hist,
        summaries=summaries,
        results=list(comparisons.results),
        skipped=list(comparisons.skipped),
        calibration=calibration,
        asn_names=dict(asn_names if asn_names is not None else load_asn_names()),
    )


# ── Summary ───────────────────────────────────────────────────────────────────

def _summary_rows(bundle: ReportBundle) -> list[dict]:
    rows = []
    for s in bundle.summaries:
        for metric in bundle.config.metrics:
            worst = s.worst.get(metric)
            if worst is None:
                continue
            rows.append({
                "metro": s.metro,
                "metric": metric,
                "server_count": s.server_count,
                "eligible_isps": s.eligible_isps.get(metric, 0),
                "pain_mode": bundle.config.mode_for(metric),
                "worst_pain": worst.pain,
                "worst_client_asn": worst.client_asn,
                "worst_server_a": worst.server_a,
                "worst_server_b": worst.server_b,
                "worst_ks_distance": worst.stat.ks_distance,
                "worst_spread_folded": worst.stat.spread_folded,
                "worst_label": worst.label,
            })
    return rows


def summary_document(bundle: ReportBundle) -> dict:
    by_metro: dict[str, list[dict]] = {}
    for r in bundle.results:
        by_metro.setdefault(r.metro, []).append(r.to_row())

    metros = []
    for s in bundle.summaries:
        metros.append({
            "metro": s.metro,
            "server_count": s.server_count,
            "eligible_isps": s.eligible_isps,
            "calibration": s.calibration,
            "worst": {m: r.to_row() for m, r in s.worst.items()},
            "worst_by_mode": {f"{m}/{mode}": r.to_row() for (m, mode), r in s.worst_by_mode.items()},
            "pairs": by_metro.get(s.metro, []),
        })
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "metadata": bundle.metadata,
        "metros": metros,
        "skipped": [c.to_row() for c in bundle.skipped],
        "calibration": [c.to_row() for c in bundle.calibration],
    }


def _to_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def _to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    pd.DataFrame(rows, columns=columns).to_csv(buf, index=False, lineterminator="\n")
    return buf.getvalue()


def emit_summary(bundle: ReportBundle, fmt: str = "json") -> str:
    """The summary document as JSON or as a delimited (metro, metric) table."""
    if fmt == "json":
        return _to_json(summary_document(bundle))
    if fmt in ("delimited", "csv"):
        return _to_csv(_summary_rows(bundle), SUMMARY_COLUMNS)
    raise ValueError(f"unknown summary format {fmt!r}")


# ── Plot data ─────────────────────────────────────────────────────────────────

def emit_plot_data(bundle: ReportBundle, metro: str, client_asn: int, metric: str) -> dict:
    """Per-server density and cumulative curves for one (metro, ISP, metric).

    Servers below the sample gate are left out of ``series`` and listed under
    ``omitted``.  All curves share one x grid: every regular bin between the
    lowest and highest occupied one, plus any occupied sentinel.
    """
    hist, config = bundle.hist, bundle.config
    doc = {
        "metro": metro,
        "client_asn": client_asn,
        "isp": isp_label(client_asn, bundle.asn_names),
        "metric": metric,
        "unit": METRICS_BY_ID.get(metric, {}).get("unit", ""),
        "x_axis": "log10",
        "series": [],
        "omitted": [],
        "note": "",
    }
    scheme = hist.schemes.get(metric)
    servers = hist.servers(metro) if metro in hist.metros() else []
    cells = {s: hist.bins(CellKey(metro, s, client_asn, metric)) for s in servers} if scheme else {}
    eligible = {}
    for server, bins in cells.items():
        n = sum(bins.values())
        if n >= config.min_samples_per_cell:
            eligible[server] = bins
        elif n:
            doc["omitted"].append({"server_id": server, "n": n, "reason": "below_min_samples"})
    if not eligible:
        doc["note"] = f"no eligible cells for {metro} AS{client_asn} {metric}"
        return doc

    occupied = sorted(set().union(*(b.keys() for b in eligible.values())))
    regular = [i for i in occupied if not scheme.is_sentinel(i)]
    grid = list(range(regular[0], regular[-1] + 1)) if regular else []
    grid = sorted(set(grid) | {i for i in occupied if scheme.is_sentinel(i)})
    x = scheme.centers(grid)

    for server, bins in eligible.items():
        n = sum(bins.values())
        density = np.array([bins.get(i, 0) for i in grid], dtype=float) / n
        doc["series"].append({
            "server_id": server,
            "n": n,
            "label": f"{server} · {isp_label(client_asn, bundle.asn_names)} (n={n:,})",
            "bin_index": grid,
            "x": x.tolist(),
            "density": density.tolist(),
            "cumulative": np.cumsum(density).tolist(),
        })
    return doc


# ── Report tree ───────────────────────────────────────────────────────────────

def write_report(bundle: ReportBundle, out_dir: str | Path, ingest: dict | None = None,
                 *, verbose: bool = False) -> list[Path]:
    """Write the full report tree into ``out_dir``.  Returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def _write(rel: str, text: str) -> None:
        path = out / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        written.append(path)

    _write("summary.json", emit_summary(bundle, "json"))
    _write("summary.csv", emit_summary(bundle, "delimited"))
    _write("pairs.csv", _to_csv([r.to_row() for r in bundle.results], PAIR_COLUMNS))
    _write("skipped.csv", _to_csv([c.to_row() for c in bundle.skipped], SKIPPED_COLUMNS))
    _write("calibration.csv", _to_csv([c.to_row() for c in bundle.calibration], CALIBRATION_COLUMNS))
    _write("ingest.json", _to_json(ingest or {}))

    if bundle.summaries:
        for metric in bundle.config.metrics:
            for mode in PAIN_MODES:
                threshold = (bundle.config.flag_ks_threshold * PAIN_KS_SCALE if mode == "ks"
                             else bundle.config.flag_spread_threshold)
                _write(f"bars_{metric}_{mode}.svg",
                       render_bars(bundle.summaries, metric, mode, threshold=threshold,
                                   asn_names=bundle.asn_names))

    keys = bundle.plot_keys()
    for k, (metro, asn, metric) in enumerate(keys):
        doc = emit_plot_data(bundle, metro, asn, metric)
        _write(f"metro/{metro}/{asn}/{metric}.json", _to_json(doc))
        _write(f"metro/{metro}/{asn}/{metric}.svg", render_distribution(doc))
        if verbose and (k + 1) % 25 == 0:
            print(f"PROGRESS: {int((k + 1) / len(keys) * 100)}% | {k + 1} plots written", flush=True)

    if verbose:
        print(f"✅ Report: {len(written)} files in {out}", flush=True)
    return written
