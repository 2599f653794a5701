"""
analysis/pairs.py — Server-pair comparisons within each metro.

For every metro, each of its top-N access ISPs, every metric and every
unordered pair of servers whose cells pass the sample gate, one ``PairResult``
is produced.  Results are then condensed into per-metro worst cases and a
per-server calibration verdict.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from analysis.constants import (
    BELOW_MIN_SAMPLES,
    CALIBRATED,
    CLEAN,
    INSUFFICIENT_DATA,
    NO_SAMPLES,
    SUSPECT,
)
from analysis.interpret import classify, is_flagged
from config import (
    CALIBRATION_METRIC,
    DEFAULT_ANALYSIS_METRICS,
    DEFAULT_CALIBRATION_KS,
    DEFAULT_FLAG_KS,
    DEFAULT_FLAG_SPREAD,
    DEFAULT_MIN_SAMPLES_PER_CELL,
    DEFAULT_PAIN_MODE,
    DEFAULT_TOP_N_ISPS,
    METRICS_BY_ID,
)
from histogram.sparse import CellKey, SparseHistogram, metro_isp_totals
from stats.difference import (
    PAIN_MODES,
    BinnedDistribution,
    DifferenceStat,
    PainMode,
    difference,
    pain_score,
)


class AnalysisConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    top_n_isps: int = Field(DEFAULT_TOP_N_ISPS, ge=1)
    min_samples_per_cell: int = Field(DEFAULT_MIN_SAMPLES_PER_CELL, ge=1)
    metrics: list[str] = Field(default_factory=lambda: list(DEFAULT_ANALYSIS_METRICS), min_length=1)
    calibration_ks_threshold: float = Field(DEFAULT_CALIBRATION_KS, gt=0.0, lt=1.0)
    pain_mode: dict[str, PainMode] = Field(default_factory=dict)
    flag_ks_threshold: float = Field(DEFAULT_FLAG_KS, gt=0.0, le=1.0)
    flag_spread_threshold: float = Field(DEFAULT_FLAG_SPREAD, ge=1.0)

    @field_validator("metrics")
    @classmethod
    def _known_metrics(cls, v: list[str]) -> list[str]:
        unknown = [m for m in v if m not in METRICS_BY_ID]
        if unknown:
            raise ValueError(f"unknown metrics: {', '.join(unknown)}")
        if len(set(v)) != len(v):
            raise ValueError("metrics must not repeat")
        return v

    @model_validator(mode="after")
    def _known_pain_modes(self) -> AnalysisConfig:
        unknown = [m for m in self.pain_mode if m not in METRICS_BY_ID]
        if unknown:
            raise ValueError(f"pain_mode set for unknown metrics: {', '.join(unknown)}")
        return self

    def mode_for(self, metric: str) -> PainMode:
        return self.pain_mode.get(metric, DEFAULT_PAIN_MODE)


@dataclass(frozen=True, slots=True)
class PairResult:
    metro: str
    client_asn: int
    server_a: str
    server_b: str
    metric: str
    stat: DifferenceStat
    pain: float
    flagged: bool = False
    label: str = CLEAN
    suspect: str | None = None

    def __post_init__(self):
        if not self.server_a < self.server_b:
            raise ValueError(f"server pair must be ordered: {self.server_a!r} ≥ {self.server_b!r}")

    @property
    def pair_key(self) -> tuple[str, str, int]:
        return self.server_a, self.server_b, self.client_asn

    def to_row(self) -> dict:
        row = {
            "metro": self.metro,
            "client_asn": self.client_asn,
            "server_a": self.server_a,
            "server_b": self.server_b,
            "metric": self.metric,
        }
        row.update(self.stat.to_dict())
        row.update({"pain": self.pain, "flagged": self.flagged,
                    "label": self.label, "suspect": self.suspect or ""})
        return row


@dataclass(frozen=True, slots=True)
class SkippedCell:
    metro: str
    client_asn: int
    server_id: str
    metric: str
    n: int
    reason: str

    def to_row(self) -> dict:
        return {"metro": self.metro, "client_asn": self.client_asn, "server_id": self.server_id,
                "metric": self.metric, "n": self.n, "reason": self.reason}


@dataclass(frozen=True, slots=True)
class ServerCalibration:
    metro: str
    server_id: str
    flag: str
    best_ks: float | None
    pairs: int

    def to_row(self) -> dict:
        return {"metro": self.metro, "server_id": self.server_id, "flag": self.flag,
                "best_ks": self.best_ks, "pairs": self.pairs}


@dataclass(slots=True)
class MetroSummary:
    metro: str
    server_count: int
    worst: dict[str, PairResult] = field(default_factory=dict)
    worst_by_mode: dict[tuple[str, str], PairResult] = field(default_factory=dict)
    eligible_isps: dict[str, int] = field(default_factory=dict)
    calibration: dict[str, str] = field(default_factory=dict)

    def worst_pair(self, metric: str, mode: PainMode) -> PairResult | None:
        return self.worst_by_mode.get((metric, mode))


class Comparisons(NamedTuple):
    results: list[PairResult]
    skipped: list[SkippedCell]


def _result_order(r: PairResult) -> tuple:
    return r.metro, r.metric, r.client_asn, r.server_a, r.server_b


# ── Operations ────────────────────────────────────────────────────────────────

def top_isps(hist: SparseHistogram, metro: str, n: int) -> list[int]:
    """Largest access ISPs by test count; ties go to the lower ASN."""
    totals = metro_isp_totals(hist, metro)
    ranked = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    return [asn for asn, _ in ranked[:n]]


def compare_cells(hist: SparseHistogram, key_a: CellKey, key_b: CellKey,
                  config: AnalysisConfig) -> PairResult:
    """One pair comparison; ``key_a`` must sort before ``key_b`` by server."""
    a = BinnedDistribution.from_cell(hist, key_a)
    b = BinnedDistribution.from_cell(hist, key_b)
    stat = difference(a, b)
    flagged = is_flagged(stat, config.flag_ks_threshold, config.flag_spread_threshold)
    label, side = classify(key_a.metric, a, b, stat, flagged)
    suspect = {"a": key_a.server_id, "b": key_b.server_id}.get(side) if side else None
    return PairResult(
        metro=key_a.metro, client_asn=key_a.client_asn,
        server_a=key_a.server_id, server_b=key_b.server_id, metric=key_a.metric,
        stat=stat, pain=pain_score(stat, config.mode_for(key_a.metric)),
        flagged=flagged, label=label, suspect=suspect,
    )


def interpret_pair(hist: SparseHistogram, result: PairResult, config: AnalysisConfig) -> str:
    key_a = CellKey(result.metro, result.server_a, result.client_asn, result.metric)
    key_b = CellKey(result.metro, result.server_b, result.client_asn, result.metric)
    return compare_cells(hist, key_a, key_b, config).label


def pairwise_diffs(hist: SparseHistogram, config: AnalysisConfig,
                   *, verbose: bool = False) -> Comparisons:
    results: list[PairResult] = []
    skipped: list[SkippedCell] = []
    metros = hist.metros()
    for m_i, metro in enumerate(metros):
        servers = hist.servers(metro)
        for asn in top_isps(hist, metro, config.top_n_isps):
            for metric in config.metrics:
                eligible: list[CellKey] = []
                for server in servers:
                    key = CellKey(metro, server, asn, metric)
                    n = hist.totals.get(key, 0)
                    if n >= config.min_samples_per_cell:
                        eligible.append(key)
                    else:
                        reason = NO_SAMPLES if n == 0 else BELOW_MIN_SAMPLES
                        skipped.append(SkippedCell(metro, asn, server, metric, n, reason))
                for key_a, key_b in combinations(eligible, 2):
                    results.append(compare_cells(hist, key_a, key_b, config))
        if verbose:
            pct = int((m_i + 1) / len(metros) * 100)
            print(f"PROGRESS: {pct}% | Compared metro {metro} ({len(servers)} servers)", flush=True)

    results.sort(key=_result_order)
    skipped.sort(key=lambda s: (s.metro, s.metric, s.client_asn, s.server_id))
    if verbose:
        flagged = sum(r.flagged for r in results)
        print(f"📊 {len(results):,} pair comparisons, {flagged:,} flagged, "
              f"{len(skipped):,} cells below the sample gate", flush=True)
    return Comparisons(results, skipped)


def known_servers(hist: SparseHistogram) -> dict[str, list[str]]:
    return {metro: hist.servers(metro) for metro in hist.metros()}


def calibration_check(results: Iterable[PairResult], config: AnalysisConfig,
                      servers: dict[str, list[str]] | None = None) -> list[ServerCalibration]:
    """CALIBRATED if the server has any throughput pair with KS at or below threshold.

    ``servers`` lists every server per metro so that servers without any
    eligible pair are reported as INSUFFICIENT_DATA.
    """
    best: dict[tuple[str, str], float] = {}
    pairs: defaultdict[tuple[str, str], int] = defaultdict(int)
    for r in results:
        if r.metric != CALIBRATION_METRIC:
            continue
        for server in (r.server_a, r.server_b):
            k = (r.metro, server)
            pairs[k] += 1
            best[k] = min(best.get(k, 1.0), r.stat.ks_distance)

    all_keys = set(pairs)
    for metro, names in (servers or {}).items():
        all_keys.update((metro, s) for s in names)

    out = []
    for metro, server in sorted(all_keys):
        k = (metro, server)
        if not pairs.get(k):
            out.append(ServerCalibration(metro, server, INSUFFICIENT_DATA, None, 0))
            continue
        flag = CALIBRATED if best[k] <= config.calibration_ks_threshold else SUSPECT
        out.append(ServerCalibration(metro, server, flag, best[k], pairs[k]))
    return out


def metro_summaries(results: Iterable[PairResult], config: AnalysisConfig,
                    servers: dict[str, list[str]] | None = None,
                    calibration: list[ServerCalibration] | None = None) -> list[MetroSummary]:
    results = list(results)
    if calibration is None:
        calibration = calibration_check(results, config, servers)

    by_metro: defaultdict[str, list[PairResult]] = defaultdict(list)
    for r in results:
        by_metro[r.metro].append(r)

    summaries = []
    for metro in sorted(by_metro):
        rs = by_metro[metro]
        names = set((servers or {}).get(metro, []))
        for r in rs:
            names.update((r.server_a, r.server_b))
        if len(names) < 2:
            continue
        summary = MetroSummary(metro=metro, server_count=len(names))
        for metric in config.metrics:
            mrs = [r for r in rs if r.metric == metric]
            if not mrs:
                continue
            summary.worst[metric] = min(mrs, key=lambda r: (-r.pain, r.pair_key))
            for mode in PAIN_MODES:
                summary.worst_by_mode[(metric, mode)] = min(
                    mrs, key=lambda r: (-pain_score(r.stat, mode), r.pair_key))
            summary.eligible_isps[metric] = len({r.client_asn for r in mrs})
        summary.calibration = {c.server_id: c.flag for c in calibration if c.metro == metro}
        summaries.append(summary)
    return summaries


def flagged_paths(results: Iterable[PairResult]) -> set[tuple[int, str]]:
    """(client ASN, server) for every server that is part of a flagged pair."""
    out = set()
    for r in results:
        if r.flagged:
            out.add((r.client_asn, r.server_a))
            out.add((r.client_asn, r.server_b))
    return out
