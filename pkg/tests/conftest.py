"""Shared builders and seeded simulator fixtures for the test suite."""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np
import pytest

from analysis.pairs import AnalysisConfig, Comparisons, pairwise_diffs
from histogram.binning import default_schemes
from histogram.sparse import CellKey, SparseHistogram
from ingest.records import MeasurementRecord
from simulator.model import SimulationResult, run_scenarios
from simulator.scenario import Scenario

ROOT = Path(__file__).resolve().parent.parent
SCENARIO_DIR = ROOT / "scenarios"
T0 = datetime(2025, 11, 24, tzinfo=timezone.utc)


# ── Oracles ───────────────────────────────────────────────────────────────────

def raw_ks(a, b) -> float:
    """Exact two-sample KS statistic by sort-merge over the raw samples."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    points = np.concatenate([a, b])
    fa = np.searchsorted(a, points, side="right") / len(a)
    fb = np.searchsorted(b, points, side="right") / len(b)
    return float(np.max(np.abs(fa - fb)))


def raw_geometric_mean(values) -> float:
    return float(np.exp(np.mean(np.log(np.asarray(values, dtype=float)))))


# ── Builders ──────────────────────────────────────────────────────────────────

def make_record(metro="gru", server="gru02", client_asn=28573, ts=T0, server_asn=1234,
                **metrics) -> MeasurementRecord:
    return MeasurementRecord(ts, metro, server, server_asn, client_asn,
                             metrics or {"download_mbps": 87.5, "min_rtt_ms": 12.3})


def isp_profile(asn: int, tiers, bottleneck=(1000.0, 0.2), rtt=(20.0, 0.1),
                peak_degradation: float = 1.0, name: str | None = None) -> dict:
    return {
        "client_asn": asn,
        "name": name,
        "tiers": [{"rate_mbps": r, "weight": w, "sigma_log10": s} for r, w, s in tiers],
        "local_bottleneck": {"median": bottleneck[0], "sigma_log10": bottleneck[1]},
        "base_rtt_ms": {"median": rtt[0], "sigma_log10": rtt[1]},
        "peak_degradation": peak_degradation,
    }


def make_scenario(metro: str = "gru", n_servers: int = 3, isps: list[dict] | None = None,
                  paths: list[dict] | None = None, rate: float = 250.0, hours: float = 168.0,
                  seed: int = 1, amplitude: float = 0.0, delay: float = 2.0,
                  peak_hour: float = 20.0) -> Scenario:
    servers = [{"server_id": f"{metro}{i + 1:02d}", "server_asn": 64500 + i,
                "propagation_delay_ms": delay} for i in range(n_servers)]
    return Scenario.model_validate({
        "metro": metro,
        "servers": servers,
        "isps": isps or [isp_profile(18881, [(30, 0.2, 0.05), (100, 0.4, 0.04), (300, 0.4, 0.04)])],
        "paths": paths or [],
        "arrival": {"mean_tests_per_hour": rate, "diurnal_amplitude": amplitude, "peak_hour": peak_hour},
        "duration_hours": hours,
        "seed": seed,
    })


def hist_from_values(cells: dict[tuple[str, str, int], list[float]], metric: str = "download_mbps",
                     bins_per_decade: int = 30) -> SparseHistogram:
    """Histogram with the given raw values per (metro, server, asn) cell."""
    from histogram.binning import bin_index

    hist = SparseHistogram(default_schemes(bins_per_decade))
    for (metro, server, asn), values in cells.items():
        key = CellKey(metro, server, asn, metric)
        for v in values:
            hist.add(key, bin_index(hist.schemes[metric], v))
    return hist


@dataclass
class SimRun:
    scenarios: list[Scenario]
    result: SimulationResult
    hist: SparseHistogram
    comparisons: Comparisons

    def pair(self, metric: str, asn: int, a: str, b: str):
        for r in self.comparisons.results:
            if (r.metric, r.client_asn, r.server_a, r.server_b) == (metric, asn, a, b):
                return r
        raise KeyError((metric, asn, a, b))

    def results(self, metric: str, asn: int | None = None, metro: str | None = None):
        return [r for r in self.comparisons.results if r.metric == metric
                and (asn is None or r.client_asn == asn) and (metro is None or r.metro == metro)]


def simulate(*scenarios: Scenario, config: AnalysisConfig | None = None) -> SimRun:
    result = run_scenarios(list(scenarios))
    hist = SparseHistogram(default_schemes()).insert_all(result.records)
    return SimRun(list(scenarios), result, hist, pairwise_diffs(hist, config or AnalysisConfig()))


# ── Seeded acceptance fixtures ────────────────────────────────────────────────

POLICER_ISP = isp_profile(28573, [(50, 0.3, 0.04), (300, 0.35, 0.04), (500, 0.35, 0.04)],
                          bottleneck=(600.0, 0.2), rtt=(15.0, 0.1), name="Claro S.A.")


@pytest.fixture(scope="session")
def clean_run() -> SimRun:
    return simulate(make_scenario(seed=11))


@pytest.fixture(scope="session")
def policer_scenario() -> Scenario:
    return make_scenario(isps=[POLICER_ISP], seed=21, paths=[
        {"client_asn": 28573, "server_id": "gru03", "throughput": {"kind": "policer", "rate_mbps": 100}},
    ])


@pytest.fixture(scope="session")
def congestion_scenario() -> Scenario:
    return make_scenario(isps=[POLICER_ISP], seed=21, paths=[
        {"client_asn": 28573, "server_id": "gru03",
         "throughput": {"kind": "congestion", "capacity_mbps": 100, "load_factor": 2.0}},
    ])


@pytest.fixture(scope="session")
def policer_run(policer_scenario) -> SimRun:
    return simulate(policer_scenario)


@pytest.fixture(scope="session")
def claro_run() -> SimRun:
    from simulator.scenario import load_scenarios

    return simulate(*load_scenarios(SCENARIO_DIR / "sao_paulo_claro.json"))


@pytest.fixture(scope="session")
def hairpin_run() -> SimRun:
    dt = isp_profile(3320, [(100, 0.6, 0.04), (250, 0.4, 0.04)], rtt=(20.0, 0.08))
    hairpin = make_scenario(metro="fra", isps=[dt], seed=3, paths=[
        {"client_asn": 3320, "server_id": "fra03", "hairpin": {"extra_rtt_ms": 30}},
    ])
    clean = make_scenario(metro="ams", isps=[isp_profile(1136, [(100, 1.0, 0.05)], rtt=(20.0, 0.08))],
                          seed=4)
    return simulate(hairpin, clean)


@pytest.fixture(scope="session")
def diurnal_run() -> SimRun:
    orange = isp_profile(3215, [(100, 0.5, 0.05), (500, 0.5, 0.05)], bottleneck=(400.0, 0.25),
                         rtt=(10.0, 0.1), peak_degradation=0.6)
    return simulate(make_scenario(metro="par", isps=[orange], amplitude=0.5, peak_hour=21, seed=5))


@pytest.fixture(scope="session")
def multi_metro_run(policer_scenario) -> SimRun:
    """Ten metros at lower volume; only gru carries a policer."""
    metros = ["ams", "ber", "cdg", "fra", "lhr", "mad", "mil", "vie", "waw"]
    clean = [make_scenario(metro=m, rate=120.0, hours=48.0, seed=100 + i,
                           isps=[isp_profile(5000 + i, [(50, 0.3, 0.04), (300, 0.7, 0.04)],
                                             bottleneck=(600.0, 0.2))])
             for i, m in enumerate(metros)]
    policer = policer_scenario.model_copy(update={"duration_hours": 48.0})
    return simulate(policer, *clean)


def day(hours: float) -> datetime:
    return T0 + timedelta(hours=hours)
