"""
simulator/model.py — Single-attachment path model with injectable mid-path effects.

Every test decomposes into a local subpath (service tier, WiFi/LAN bottleneck
and peak-hour degradation, all inside the access ISP) and a mid-path subpath
to the server, where the scenario's PathEffect applies.  The server is picked
uniformly at random, independent of everything else.

Random streams:
    For each ISP, ``SeedSequence([seed, crc32(metro), client_asn])`` is spawned into two
    PCG64 streams.  Stream 0 draws the arrival instants.  Stream 1 draws the
    per-test values in fixed vectorized blocks (server, tier, tier noise,
    bottleneck noise, base-RTT noise, congestion share), so the i-th arrival
    always consumes element i of each block.  The congestion share is drawn
    for every test whether or not its path is congested, which keeps the
    streams independent of the path configuration.

SharedCongestion share: ``Beta(2, 5) × 3.5`` (unit mean, right-skewed),
divided by ``load_factor`` and clamped to ``[1e-6, 1]``.
"""
from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from datetime import timedelta
from pathlib import Path

import numpy as np

from config import SNAPSHOT_SCHEMA_VERSION
from ingest.records import MeasurementRecord
from simulator.scenario import (
    IspProfile,
    PathEffect,
    PerFlowPolicer,
    Scenario,
    SharedCongestion,
)

SHARE_BETA_A = 2.0
SHARE_BETA_B = 5.0
SHARE_SCALE = (SHARE_BETA_A + SHARE_BETA_B) / SHARE_BETA_A
SHARE_FLOOR = 1e-6


@dataclass(slots=True)
class SampleBatch:
    """Vectorized draws for one ISP.  ``local_rate`` is before any path effect."""
    t_hours: np.ndarray
    server_index: np.ndarray
    local_rate: np.ndarray
    download_mbps: np.ndarray
    min_rtt_ms: np.ndarray

    def __len__(self) -> int:
        return len(self.t_hours)


@dataclass(frozen=True, slots=True)
class TruthEntry:
    metro: str
    client_asn: int
    server_id: str
    effect: PathEffect

    def to_dict(self) -> dict:
        return {
            "metro": self.metro,
            "client_asn": self.client_asn,
            "server_id": self.server_id,
            "effect": self.effect.describe(),
            "params": self.effect.model_dump(exclude_none=True),
        }


@dataclass(slots=True)
class GroundTruth:
    """Every non-Clean PathEffect, keyed by (client_asn, server_id) within a metro."""
    entries: list[TruthEntry] = field(default_factory=list)
    record_counts: dict[str, int] = field(default_factory=dict)

    def paths(self) -> set[tuple[int, str]]:
        return {(e.client_asn, e.server_id) for e in self.entries}

    def effect(self, client_asn: int, server_id: str) -> PathEffect | None:
        for e in self.entries:
            if e.client_asn == client_asn and e.server_id == server_id:
                return e.effect
        return None

    def extend(self, other: GroundTruth) -> None:
        self.entries.extend(other.entries)
        self.entries.sort(key=lambda e: (e.metro, e.client_asn, e.server_id))
        self.record_counts.update(other.record_counts)

    def to_dict(self) -> dict:
        return {
            "schema_version": SNAPSHOT_SCHEMA_VERSION,
            "effects": [e.to_dict() for e in self.entries],
            "records": dict(sorted(self.record_counts.items())),
        }

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")


@dataclass(slots=True)
class SimulationResult:
    records: list[MeasurementRecord]
    ground_truth: GroundTruth


# ── Streams ───────────────────────────────────────────────────────────────────

def isp_streams(seed: int, metro: str, client_asn: int) -> tuple[np.random.Generator, np.random.Generator]:
    entropy = [seed, zlib.crc32(metro.encode("utf-8")), client_asn]
    arrivals, measurements = np.random.SeedSequence(entropy).spawn(2)
    return np.random.Generator(np.random.PCG64(arrivals)), np.random.Generator(np.random.PCG64(measurements))


# ── Time of day ───────────────────────────────────────────────────────────────

def hour_of_day(scenario: Scenario, t_hours) -> np.ndarray:
    start = scenario.start
    h0 = start.hour + start.minute / 60.0 + start.second / 3600.0
    return np.mod(h0 + np.asarray(t_hours, dtype=float), 24.0)


def arrival_rate(scenario: Scenario, isp: IspProfile, t_hours) -> np.ndarray:
    a = scenario.arrival
    phase = 2.0 * np.pi * (hour_of_day(scenario, t_hours) - a.peak_hour) / 24.0
    return scenario.tests_per_hour(isp) * (1.0 + a.diurnal_amplitude * np.cos(phase))


def peak_factor(scenario: Scenario, isp: IspProfile, t_hours) -> np.ndarray:
    """``peak_degradation`` inside the peak window, 1 elsewhere."""
    a = scenario.arrival
    h = hour_of_day(scenario, t_hours)
    dist = np.abs(np.mod(h - a.peak_hour + 12.0, 24.0) - 12.0)
    return np.where(dist <= a.peak_window_hours / 2.0, isp.peak_degradation, 1.0)


def arrival_times(scenario: Scenario, isp: IspProfile, rng: np.random.Generator) -> np.ndarray:
    """Sorted arrival instants in hours from start, by thinning a homogeneous process."""
    duration = scenario.duration_hours
    if duration <= 0:
        return np.empty(0)
    peak_rate = scenario.tests_per_hour(isp) * (1.0 + scenario.arrival.diurnal_amplitude)
    n = rng.poisson(peak_rate * duration)
    t = np.sort(rng.uniform(0.0, duration, n))
    keep = rng.uniform(0.0, 1.0, n) * peak_rate < arrival_rate(scenario, isp, t)
    return t[keep]


# ── Path model ────────────────────────────────────────────────────────────────

def _lognormal(rng: np.random.Generator, median: float, sigma_log10: float, n: int) -> np.ndarray:
    return median * np.power(10.0, sigma_log10 * rng.standard_normal(n))


def apply_throughput(effect: PathEffect, local_rate: np.ndarray, share: np.ndarray) -> np.ndarray:
    eff = effect.throughput
    if isinstance(eff, PerFlowPolicer):
        return np.minimum(local_rate, eff.rate_mbps)
    if isinstance(eff, SharedCongestion):
        s = np.clip(share / eff.load_factor, SHARE_FLOOR, 1.0)
        return np.minimum(local_rate, eff.capacity_mbps * s)
    return local_rate


def sample_batch(scenario: Scenario, isp: IspProfile, t_hours, rng: np.random.Generator) -> SampleBatch:
    t = np.asarray(t_hours, dtype=float)
    n = len(t)
    servers = scenario.servers

    server_index = rng.integers(0, len(servers), n)
    tier_index = rng.choice(len(isp.tiers), n, p=isp.tier_weights)
    tier_noise = rng.standard_normal(n)
    bottleneck = _lognormal(rng, isp.local_bottleneck.median, isp.local_bottleneck.sigma_log10, n)
    base_rtt = _lognormal(rng, isp.base_rtt_ms.median, isp.base_rtt_ms.sigma_log10, n)
    share = rng.beta(SHARE_BETA_A, SHARE_BETA_B, n) * SHARE_SCALE

    rates = np.array([tier.rate_mbps for tier in isp.tiers])
    sigmas = np.array([tier.sigma_log10 for tier in isp.tiers])
    tier_rate = rates[tier_index] * np.power(10.0, sigmas[tier_index] * tier_noise)
    local_rate = np.minimum(tier_rate, bottleneck) * peak_factor(scenario, isp, t)

    download = local_rate.copy()
    min_rtt = base_rtt.copy()
    for i, server in enumerate(servers):
        on = server_index == i
        if not on.any():
            continue
        effect = scenario.path_effect(isp.client_asn, server.server_id)
        download[on] = apply_throughput(effect, local_rate[on], share[on])
        extra = effect.hairpin.extra_rtt_ms if effect.hairpin else 0.0
        min_rtt[on] += server.propagation_delay_ms + extra

    return SampleBatch(t, server_index, local_rate, download, min_rtt)


def _to_records(scenario: Scenario, isp: IspProfile, batch: SampleBatch) -> list[MeasurementRecord]:
    records = []
    for t, s, down, rtt in zip(batch.t_hours.tolist(), batch.server_index.tolist(),
                               batch.download_mbps.tolist(), batch.min_rtt_ms.tolist()):
        server = scenario.servers[s]
        records.append(MeasurementRecord(
            timestamp=scenario.start + timedelta(seconds=int(t * 3600.0)),
            metro=scenario.metro,
            server_id=server.server_id,
            server_asn=server.server_asn,
            client_asn=isp.client_asn,
            metrics={"download_mbps": down, "min_rtt_ms": rtt},
        ))
    return records


def sample_measurement(scenario: Scenario, isp: IspProfile, t: float,
                       rng: np.random.Generator) -> MeasurementRecord:
    """One test at ``t`` hours after the scenario start."""
    if not 0.0 <= t <= scenario.duration_hours:
        raise ValueError(f"t={t} outside scenario duration {scenario.duration_hours}")
    batch = sample_batch(scenario, isp, [t], rng)
    return _to_records(scenario, isp, batch)[0]


def ground_truth(scenario: Scenario) -> GroundTruth:
    entries = [TruthEntry(scenario.metro, p.client_asn, p.server_id, p.effect)
               for p in scenario.paths if not p.effect.is_clean]
    entries.sort(key=lambda e: (e.metro, e.client_asn, e.server_id))
    return GroundTruth(entries)


def simulate_isp(scenario: Scenario, isp: IspProfile) -> SampleBatch:
    arrivals_rng, measurement_rng = isp_streams(scenario.seed, scenario.metro, isp.client_asn)
    t = arrival_times(scenario, isp, arrivals_rng)
    return sample_batch(scenario, isp, t, measurement_rng)


def run_scenario(scenario: Scenario, *, verbose: bool = False) -> SimulationResult:
    """All tests of one scenario ordered by (timestamp, client_asn, arrival index)."""
    keyed: list[tuple[tuple, MeasurementRecord]] = []
    isps = sorted(scenario.isps, key=lambda i: i.client_asn)
    for k, isp in enumerate(isps):
        batch = simulate_isp(scenario, isp)
        for idx, rec in enumerate(_to_records(scenario, isp, batch)):
            keyed.append(((rec.timestamp, isp.client_asn, idx), rec))
        if verbose:
            pct = int((k + 1) / len(isps) * 100)
            print(f"PROGRESS: {pct}% | {scenario.metro} AS{isp.client_asn}: {len(batch):,} tests", flush=True)

    keyed.sort(key=lambda kr: kr[0])
    records = [r for _, r in keyed]
    truth = ground_truth(scenario)
    truth.record_counts[scenario.metro] = len(records)
    return SimulationResult(records, truth)


def run_scenarios(scenarios: list[Scenario], *, verbose: bool = False) -> SimulationResult:
    """Several metros merged into one timestamp-ordered sequence."""
    keyed: list[tuple[tuple, MeasurementRecord]] = []
    truth = GroundTruth()
    for scenario in sorted(scenarios, key=lambda s: s.metro):
        result = run_scenario(scenario, verbose=verbose)
        keyed.extend(((r.timestamp, r.metro, r.client_asn, i), r) for i, r in enumerate(result.records))
        truth.extend(result.ground_truth)
        if verbose:
            print(f"✅ {scenario.metro}: {len(result.records):,} records, "
                  f"{len(result.ground_truth.entries)} injected effects", flush=True)
    keyed.sort(key=lambda kr: kr[0])
    return SimulationResult([r for _, r in keyed], truth)
