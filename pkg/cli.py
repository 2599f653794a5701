"""
cli.py — Command-line driver: ingest → histogram → analysis → report.

Usage:
    python cli.py analyze --input data.jsonl --out report/
    python cli.py analyze --snapshot week48.csv --pain-mode min_rtt_ms=spread
    python cli.py simulate scenarios/sao_paulo_claro.json --seed 7 --out sim.csv
    python cli.py snapshot --input sim.csv --from 2025-11-24 --to 2025-12-01 --out week48.csv
    python cli.py diff-snapshots week47.csv week48.csv --out diff.csv
    python cli.py plot --input sim.csv --metro gru --asn 28573 --html

Settings are layered: built-in defaults → config file (``--config`` or
./settings.json) → flags.  ``--show-config`` prints the merged result.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import shutil
import sys
from datetime import datetime, timedelta
from pathlib import Path
from typing import Callable

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from analysis.pairs import AnalysisConfig, pairwise_diffs
from config import DEFAULT_SETTINGS, METRIC_IDS, MIN_BINS_PER_DECADE, SETTINGS_FILE
from histogram.binning import BinningScheme, default_schemes
from histogram.snapshot import load_snapshot, save_snapshot
from histogram.sparse import SchemeMismatchError, SparseHistogram
from ingest.records import (
    IngestFilter,
    IngestStats,
    detect_format,
    format_timestamp,
    ingest_files,
    log_summary,
    normalize_format,
    parse_timestamp,
    write_records,
)
from reporting.bundle import ReportBundle, build_bundle, emit_plot_data, write_report
from reporting.figures import write_html
from reporting.names import load_asn_names, names_path_for, write_asn_names
from reporting.svg import render_distribution
from simulator.model import run_scenarios
from simulator.scenario import ScenarioError, isp_names, load_scenarios
from stats.difference import PAIN_MODES, BinnedDistribution, PainMode, difference

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

DIFF_COLUMNS = [
    "metro", "server_id", "client_asn", "metric", "status", "n_a", "n_b",
    "ks_distance", "spread", "spread_folded", "pain_ks", "truncated",
]


class UsageError(Exception):
    """Bad flags, config file or scenario; exit code 2."""


# ── Run configuration ─────────────────────────────────────────────────────────

class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    inputs: list[str] = Field(default_factory=list)
    format: str | None = None
    time_from: datetime | None = None
    time_to: datetime | None = None
    metros: list[str] = Field(default_factory=list)
    bounds: dict[str, tuple[float | None, float | None]] = Field(default_factory=dict)
    bins_per_decade: int = Field(DEFAULT_SETTINGS["bins_per_decade"], ge=MIN_BINS_PER_DECADE)
    reference: float = Field(DEFAULT_SETTINGS["reference"], gt=0.0)
    top_n_isps: int = Field(DEFAULT_SETTINGS["top_n_isps"], ge=1)
    min_samples_per_cell: int = Field(DEFAULT_SETTINGS["min_samples_per_cell"], ge=1)
    metrics: list[str] = Field(default_factory=lambda: list(DEFAULT_SETTINGS["metrics"]))
    calibration_ks_threshold: float = DEFAULT_SETTINGS["calibration_ks_threshold"]
    pain_mode: dict[str, PainMode] = Field(default_factory=dict)
    flag_ks_threshold: float = DEFAULT_SETTINGS["flag_ks_threshold"]
    flag_spread_threshold: float = DEFAULT_SETTINGS["flag_spread_threshold"]
    out: str = DEFAULT_SETTINGS["out"]

    @model_validator(mode="before")
    @classmethod
    def _expand_pain_mode(cls, data):
        if isinstance(data, dict) and isinstance(data.get("pain_mode"), str):
            metrics = data.get("metrics") or DEFAULT_SETTINGS["metrics"]
            data = {**data, "pain_mode": {m: data["pain_mode"] for m in metrics}}
        return data

    @field_validator("format")
    @classmethod
    def _format(cls, v: str | None) -> str | None:
        return normalize_format(v) if v else None

    @field_validator("time_from", "time_to", mode="before")
    @classmethod
    def _timestamp(cls, v):
        if v in (None, "") or isinstance(v, datetime):
            return v or None
        return parse_timestamp(v)

    @model_validator(mode="after")
    def _consistent(self) -> RunConfig:
        if self.time_from and self.time_to and not self.time_from < self.time_to:
            raise ValueError("time_from must precede time_to")
        unknown = [m for m in self.bounds if m not in METRIC_IDS]
        if unknown:
            raise ValueError(f"bounds for unknown metrics: {', '.join(unknown)}")
        try:
            self.analysis_config()
        except ValidationError as e:
            raise ValueError("; ".join(err["msg"] for err in e.errors())) from None
        return self

    def analysis_config(self) -> AnalysisConfig:
        return AnalysisConfig(
            top_n_isps=self.top_n_isps,
            min_samples_per_cell=self.min_samples_per_cell,
            metrics=self.metrics,
            calibration_ks_threshold=self.calibration_ks_threshold,
            pain_mode=self.pain_mode,
            flag_ks_threshold=self.flag_ks_threshold,
            flag_spread_threshold=self.flag_spread_threshold,
        )

    def ingest_filter(self) -> IngestFilter:
        return IngestFilter(
            time_from=self.time_from,
            time_to=self.time_to,
            metros=frozenset(self.metros) if self.metros else None,
            bounds=dict(self.bounds),
        )

    def schemes(self) -> dict[str, BinningScheme]:
        return default_schemes(self.bins_per_decade, self.reference)

    def echo(self) -> dict:
        """Every effective setting except the output location."""
        data = self.model_dump(mode="json", exclude={"out"})
        data["pain_mode"] = {m: self.analysis_config().mode_for(m) for m in self.metrics}
        return data


def _read_settings(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e.msg}, line {e.lineno})") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path}: config must be a JSON object")
    return data


def _apply_pain_modes(tokens: list[str], current, metrics: list[str]) -> dict:
    modes = dict(current) if isinstance(current, dict) else {m: current for m in metrics}
    for tok in tokens:
        metric, sep, mode = tok.partition("=")
        if not sep:
            mode = metric
            for m in metrics:
                modes[m] = mode
        else:
            modes[metric] = mode
        if mode not in PAIN_MODES:
            raise UsageError(f"--pain-mode {tok!r}: mode must be one of {', '.join(PAIN_MODES)}")
    return modes


def resolve_config(args: argparse.Namespace) -> RunConfig:
    settings = json.loads(json.dumps(DEFAULT_SETTINGS))
    config_path = Path(args.config) if getattr(args, "config", None) else (
        SETTINGS_FILE if SETTINGS_FILE.is_file() else None)
    if config_path is not None:
        settings.update(_read_settings(config_path))

    flags = {
        "inputs": getattr(args, "input", None),
        "format": getattr(args, "format", None),
        "time_from": getattr(args, "time_from", None),
        "time_to": getattr(args, "time_to", None),
        "metros": getattr(args, "metro", None),
        "bins_per_decade": getattr(args, "bins_per_decade", None),
        "top_n_isps": getattr(args, "top_isps", None),
        "min_samples_per_cell": getattr(args, "min_samples", None),
    }
    if args.command == "analyze":
        flags["out"] = getattr(args, "out", None)
    settings.update({k: v for k, v in flags.items() if v is not None})
    if getattr(args, "pain_mode", None):
        settings["pain_mode"] = _apply_pain_modes(args.pain_mode, settings.get("pain_mode", "ks"),
                                                  settings.get("metrics") or [])
    try:
        return RunConfig.model_validate(settings)
    except ValidationError as e:
        keys = [".".join(str(p) for p in err["loc"]) or "<config>" for err in e.errors()]
        details = "; ".join(f"{k}: {err['msg']}" for k, err in zip(keys, e.errors()))
        raise UsageError(f"invalid configuration ({details})") from None


def show_config(cfg: RunConfig) -> int:
    print(json.dumps(cfg.model_dump(mode="json"), indent=2, sort_keys=True))
    return EXIT_OK


# ── Pipeline pieces ───────────────────────────────────────────────────────────

def _check_inputs(cfg: RunConfig) -> None:
    if not cfg.inputs:
        raise UsageError("no input: pass --input (or --snapshot)")
    if cfg.format is None:
        for p in cfg.inputs:
            try:
                detect_format(p)
            except ValueError as e:
                raise UsageError(str(e)) from None


def build_histogram(cfg: RunConfig, *, verbose: bool = False) -> tuple[SparseHistogram, IngestStats, dict]:
    """One pass over the inputs.  Returns the histogram, ingest stats and run metadata."""
    _check_inputs(cfg)
    digest = hashlib.sha256()
    records, stats = ingest_files(cfg.inputs, cfg.ingest_filter(), cfg.format,
                                  digest=digest, verbose=verbose)
    hist = SparseHistogram(cfg.schemes())
    first = last = None
    for r in records:
        hist.insert(r)
        if first is None or r.timestamp < first:
            first = r.timestamp
        if last is None or r.timestamp > last:
            last = r.timestamp
    if verbose:
        log_summary(stats)
    meta = {
        "input_digest": f"sha256:{digest.hexdigest()}",
        "inputs": list(cfg.inputs),
        "first_record": format_timestamp(first) if first else None,
        "last_record": format_timestamp(last) if last else None,
        "record_count": stats.accepted,
    }
    return hist, stats, meta


def load_snapshot_input(path: str, cfg: RunConfig) -> tuple[SparseHistogram, dict]:
    if cfg.inputs or cfg.time_from or cfg.time_to:
        raise UsageError("--snapshot is already binned and windowed; drop --input, --from and --to")
    snap = load_snapshot(path)
    with open(path, "rb") as f:
        digest = hashlib.sha256(f.read()).hexdigest()
    hist = snap.hist
    if cfg.metros:
        keep = set(cfg.metros)
        filtered = SparseHistogram(hist.schemes)
        for (key, idx), count in hist.items():
            if key.metro in keep:
                filtered.add(key, idx, count)
        hist = filtered
    meta = {
        "input_digest": f"sha256:{digest}",
        "inputs": [str(path)],
        "first_record": snap.window_from,
        "last_record": snap.window_to,
        "record_count": None,
    }
    return hist, meta


def adopt_snapshot_scheme(cfg: RunConfig, hist: SparseHistogram, requested_bins: int | None = None) -> RunConfig:
    """The snapshot's binning is what takes effect; an explicit conflicting flag is a usage error."""
    if not hist.schemes:
        return cfg
    scheme = hist.schemes[min(hist.schemes)]
    if requested_bins is not None and requested_bins != scheme.bins_per_decade:
        raise UsageError(f"--bins-per-decade {requested_bins} conflicts with the snapshot's "
                         f"{scheme.bins_per_decade} bins per decade")
    return cfg.model_copy(update={"bins_per_decade": scheme.bins_per_decade,
                                  "reference": scheme.reference})


def _name_sources(cfg: RunConfig, snapshot: str | None) -> list[str]:
    return [snapshot] if snapshot else list(cfg.inputs)


def _replace_dir(out: Path, build: Callable[[Path], None]) -> None:
    """Build into ``<out>.partial`` and move it into place only on success."""
    out = out.resolve()
    cwd = Path.cwd().resolve()
    if out == cwd or out in cwd.parents:
        raise UsageError(f"--out {out}: refusing to replace the working directory or one of its parents")
    if out.exists() and not out.is_dir():
        raise UsageError(f"{out} exists and is not a directory")
    if out.is_dir() and any(out.iterdir()) and not (out / "summary.json").is_file():
        raise UsageError(f"{out} is not empty and holds no report; refusing to overwrite")
    partial = out.with_name(out.name + ".partial")
    if partial.exists():
        shutil.rmtree(partial)
    try:
        build(partial)
        if out.exists():
            shutil.rmtree(out)
        partial.rename(out)
    except BaseException:
        shutil.rmtree(partial, ignore_errors=True)
        raise


def _write_csv(rows: list[dict], columns: list[str], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=columns).to_csv(path, index=False, lineterminator="\n")


# ── Subcommands ───────────────────────────────────────────────────────────────

def cmd_analyze(cfg: RunConfig, snapshot: str | None = None, *, verbose: bool = True,
                requested_bins: int | None = None) -> int:
    if snapshot:
        hist, meta = load_snapshot_input(snapshot, cfg)
        cfg = adopt_snapshot_scheme(cfg, hist, requested_bins)
        ingest = {"source": "snapshot"}
    else:
        hist, stats, meta = build_histogram(cfg, verbose=verbose)
        ingest = stats.to_dict()

    analysis = cfg.analysis_config()
    comparisons = pairwise_diffs(hist, analysis, verbose=verbose)
    meta["config"] = cfg.echo()
    meta["schemes"] = {m: s.to_dict() for m, s in sorted(hist.schemes.items())}
    bundle = build_bundle(hist, comparisons, analysis, meta,
                          load_asn_names(sidecars=_name_sources(cfg, snapshot)))

    out = Path(cfg.out)
    _replace_dir(out, lambda d: write_report(bundle, d, ingest, verbose=verbose))
    if verbose:
        flagged = sum(r.flagged for r in bundle.results)
        print(f"✅ {len(bundle.results):,} pairs ({flagged:,} flagged) across "
              f"{len(bundle.summaries)} metros → {out}", flush=True)
    return EXIT_OK


def truth_path_for(records_path: Path) -> Path:
    return records_path.with_name(records_path.name.split(".")[0] + ".truth.json")


def cmd_simulate(scenario: str, seed: int | None, out: str, fmt: str | None = None,
                 *, verbose: bool = True) -> int:
    scenarios = load_scenarios(scenario)
    if seed is not None:
        scenarios = [s.with_seed(seed) for s in scenarios]
    out_path = Path(out)
    try:
        fmt = normalize_format(fmt) if fmt else detect_format(out_path)
    except ValueError as e:
        raise UsageError(str(e)) from None

    result = run_scenarios(scenarios, verbose=verbose)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    n = write_records(result.records, out_path, fmt)
    truth = truth_path_for(out_path)
    result.ground_truth.write(truth)
    write_asn_names(isp_names(scenarios), names_path_for(out_path))
    if verbose:
        print(f"✅ {n:,} records → {out_path}; ground truth → {truth}", flush=True)
    return EXIT_OK


def cmd_snapshot(cfg: RunConfig, out: str, *, verbose: bool = True) -> int:
    hist, _, meta = build_histogram(cfg, verbose=verbose)
    window_from = format_timestamp(cfg.time_from) if cfg.time_from else meta["first_record"]
    window_to = format_timestamp(cfg.time_to) if cfg.time_to else None
    if window_to is None and meta["last_record"]:
        # Half-open window: end just past the last record.
        window_to = format_timestamp(parse_timestamp(meta["last_record"]) + timedelta(seconds=1))
    n = save_snapshot(hist, out, window_from, window_to)
    if verbose:
        print(f"✅ Snapshot: {len(hist.cells()):,} cells, {n:,} bins → {out}", flush=True)
    return EXIT_OK


def snapshot_diff_rows(a: SparseHistogram, b: SparseHistogram) -> list[dict]:
    """Same-cell comparison across two snapshots; cells on one side only are listed too."""
    if a.schemes != b.schemes:
        raise SchemeMismatchError("snapshots were binned with different schemes")
    rows = []
    cells_a, cells_b = set(a.cells()), set(b.cells())
    for key in sorted(cells_a | cells_b):
        row = {"metro": key.metro, "server_id": key.server_id,
               "client_asn": key.client_asn, "metric": key.metric}
        if key in cells_a and key in cells_b:
            stat = difference(BinnedDistribution.from_cell(a, key), BinnedDistribution.from_cell(b, key))
            row["status"] = "both"
            row.update(stat.to_dict())
        else:
            row["status"] = "only_a" if key in cells_a else "only_b"
            row["n_a"] = a.totals.get(key, 0)
            row["n_b"] = b.totals.get(key, 0)
        rows.append(row)
    return rows


def cmd_diff_snapshots(path_a: str, path_b: str, out: str, *, verbose: bool = True) -> int:
    a, b = load_snapshot(path_a), load_snapshot(path_b)
    rows = snapshot_diff_rows(a.hist, b.hist)
    _write_csv(rows, DIFF_COLUMNS, Path(out))
    if verbose:
        both = [r for r in rows if r["status"] == "both"]
        worst = max((r["ks_distance"] for r in both), default=0.0)
        print(f"📊 {path_a} [{a.window_from} → {a.window_to}] vs {path_b} "
              f"[{b.window_from} → {b.window_to}]", flush=True)
        print(f"✅ {len(both):,} shared cells (max KS {worst:.3f}), "
              f"{len(rows) - len(both):,} one-sided → {out}", flush=True)
    return EXIT_OK


def cmd_plot(cfg: RunConfig, metro: str, asn: int, metric: str, out: str,
             snapshot: str | None = None, html: bool = False, *, verbose: bool = True) -> int:
    if metric not in METRIC_IDS:
        raise UsageError(f"unknown metric {metric!r} (expected one of {', '.join(METRIC_IDS)})")
    if snapshot:
        hist, _ = load_snapshot_input(snapshot, cfg)
    else:
        hist, _, _ = build_histogram(cfg, verbose=verbose)

    bundle = ReportBundle(metadata={}, config=cfg.analysis_config(), hist=hist,
                          asn_names=load_asn_names(sidecars=_name_sources(cfg, snapshot)))
    doc = emit_plot_data(bundle, metro, asn, metric)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = out_dir / f"{metro}_{asn}_{metric}"
    with open(stem.with_suffix(".json"), "w", encoding="utf-8") as f:
        f.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    with open(stem.with_suffix(".svg"), "w", encoding="utf-8") as f:
        f.write(render_distribution(doc))
    if html:
        write_html(doc, stem.with_suffix(".html"))
    if verbose:
        if doc["note"]:
            print(f"⚠️ {doc['note']}", flush=True)
        print(f"✅ {len(doc['series'])} series → {stem}.*", flush=True)
    return EXIT_OK


# ── Argument parsing ──────────────────────────────────────────────────────────

def _common_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", default=None, help="JSON settings file (default: ./settings.json if present)")
    p.add_argument("--show-config", action="store_true", help="Print the effective settings and exit")
    p.add_argument("--quiet", action="store_true", help="Suppress progress output")
    return p


def _input_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", action="append", default=None, metavar="PATH",
                   help="Measurement file (.csv, .jsonl, optionally .gz); repeatable")
    p.add_argument("--format", default=None, choices=["csv", "delimited", "jsonl", "json-lines"],
                   help="Input format (default: from the file extension)")
    p.add_argument("--from", dest="time_from", default=None, help="Window start (inclusive), ISO-8601 or epoch")
    p.add_argument("--to", dest="time_to", default=None, help="Window end (exclusive), ISO-8601 or epoch")
    p.add_argument("--metro", action="append", default=None, help="Restrict to a metro; repeatable")
    p.add_argument("--bins-per-decade", type=int, default=None)
    return p


def _analysis_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--top-isps", type=int, default=None, help="Access ISPs analyzed per metro")
    p.add_argument("--min-samples", type=int, default=None, help="Minimum tests per cell")
    p.add_argument("--pain-mode", action="append", default=None, metavar="MODE|METRIC=MODE",
                   help="ks or spread, for all metrics or one; repeatable")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="midpath-ab",
        description="Mid-path anomaly detection by comparing nearby servers' test distributions",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    common, inputs, analysis = _common_parent(), _input_parent(), _analysis_parent()

    p = sub.add_parser("analyze", parents=[common, inputs, analysis], help="Full pipeline to a report tree")
    p.add_argument("--snapshot", default=None, help="Analyze a saved snapshot instead of raw input")
    p.add_argument("--out", default=None, help="Report directory (default: ./report)")
    p.set_defaults(handler=_run_analyze)

    p = sub.add_parser("simulate", parents=[common], help="Generate synthetic records from a scenario")
    p.add_argument("scenario", help="Scenario JSON file")
    p.add_argument("--seed", type=int, default=None, help="Override the scenario seed")
    p.add_argument("--out", default="simulated.csv", help="Record file (default: simulated.csv)")
    p.add_argument("--format", default=None, choices=["csv", "delimited", "jsonl", "json-lines"])
    p.set_defaults(handler=_run_simulate)

    p = sub.add_parser("snapshot", parents=[common, inputs], help="Save the binned histogram of a window")
    p.add_argument("--out", default="snapshot.csv", help="Snapshot file (default: snapshot.csv)")
    p.set_defaults(handler=_run_snapshot)

    p = sub.add_parser("diff-snapshots", parents=[common], help="Compare two snapshots cell by cell")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out", default="snapshot_diff.csv", help="Output table (default: snapshot_diff.csv)")
    p.set_defaults(handler=_run_diff)

    p = sub.add_parser("plot", parents=[common, inputs, analysis], help="Per-server distribution overlay")
    p.add_argument("--snapshot", default=None)
    p.add_argument("--asn", type=int, required=True, help="Client ASN")
    p.add_argument("--metric", default="download_mbps", choices=METRIC_IDS)
    p.add_argument("--html", action="store_true", help="Also write an interactive plotly HTML file")
    p.add_argument("--out", default="plots", help="Output directory (default: ./plots)")
    p.set_defaults(handler=_run_plot)
    return parser


def _run_analyze(args) -> int:
    cfg = resolve_config(args)
    if args.show_config:
        return show_config(cfg)
    return cmd_analyze(cfg, args.snapshot, verbose=not args.quiet, requested_bins=args.bins_per_decade)


def _run_simulate(args) -> int:
    if args.show_config:
        print(json.dumps({"scenario": args.scenario, "seed": args.seed, "out": args.out,
                          "format": args.format}, indent=2, sort_keys=True))
        return EXIT_OK
    return cmd_simulate(args.scenario, args.seed, args.out, args.format, verbose=not args.quiet)


def _run_snapshot(args) -> int:
    cfg = resolve_config(args)
    if args.show_config:
        return show_config(cfg)
    return cmd_snapshot(cfg, args.out, verbose=not args.quiet)


def _run_diff(args) -> int:
    if args.show_config:
        print(json.dumps({"a": args.a, "b": args.b, "out": args.out}, indent=2, sort_keys=True))
        return EXIT_OK
    return cmd_diff_snapshots(args.a, args.b, args.out, verbose=not args.quiet)


def _run_plot(args) -> int:
    cfg = resolve_config(args)
    if args.show_config:
        return show_config(cfg)
    if not args.metro or len(args.metro) != 1:
        raise UsageError("plot needs exactly one --metro")
    return cmd_plot(cfg, args.metro[0], args.asn, args.metric, args.out,
                    args.snapshot, args.html, verbose=not args.quiet)


def _fail(err: Exception) -> None:
    print(f"❌ {err}", file=sys.stderr, flush=True)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    if getattr(args, "handler", None) is None:
        parser.print_help()
        return EXIT_USAGE

    try:
        return args.handler(args)
    except (UsageError, ScenarioError) as e:
        _fail(e)
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        _fail(e)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
