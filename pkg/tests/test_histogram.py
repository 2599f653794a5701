"""Log binning, sparse histogram algebra and snapshots."""
import math

import numpy as np
import pytest

from histogram.binning import BinningScheme, bin_index, bin_indices, default_scheme, default_schemes
from histogram.snapshot import load_snapshot, save_snapshot
from histogram.sparse import (
    CellKey,
    SchemeMismatchError,
    SparseHistogram,
    cell_distribution,
    merge,
    merge_all,
    metro_isp_totals,
)
from ingest.records import SourceError
from tests.conftest import day, make_record

TEN = BinningScheme(bins_per_decade=10)


# ── Binning ───────────────────────────────────────────────────────────────────

def test_bin_index_examples():
    assert bin_index(TEN, 1.0) == 0
    assert bin_index(TEN, 100.0) == 20
    assert bin_index(default_scheme("download_mbps"), 87.5) == 58


def test_exact_boundaries_land_in_the_upper_bin():
    scheme = default_scheme("download_mbps")
    for k in range(-50, 140):
        assert bin_index(scheme, 10 ** (k / 30)) == k


def test_values_just_below_a_boundary_stay_in_the_lower_bin():
    scheme = default_scheme("download_mbps")
    assert bin_index(scheme, 10 ** (1 / 30) * (1 - 1e-12)) == 0
    edges = np.array([scheme.edge(k) for k in range(-50, 140)])
    below = np.nextafter(edges, 0.0)
    expected = list(range(-51, 139))
    assert [bin_index(scheme, v) for v in below] == expected
    assert bin_indices(scheme, below).tolist() == expected
    assert bin_indices(scheme, edges).tolist() == list(range(-50, 140))


def test_sentinels():
    scheme = default_scheme("download_mbps")
    assert scheme.underflow_index == -61
    assert scheme.overflow_index == 150
    assert bin_index(scheme, 0.005) == scheme.underflow_index
    assert bin_index(scheme, 0.01) == scheme.underflow_index
    assert bin_index(scheme, 1e5) == scheme.overflow_index
    assert bin_index(scheme, 3e7) == scheme.overflow_index
    assert bin_index(default_scheme("loss_rate"), 0.0) == default_scheme("loss_rate").underflow_index
    assert scheme.lower(scheme.underflow_index) == 0.0
    assert scheme.upper(scheme.overflow_index) == math.inf


@pytest.mark.parametrize("bad", [-1.0, math.nan, math.inf])
def test_bin_index_rejects_invalid_values(bad):
    with pytest.raises(ValueError):
        bin_index(default_scheme("download_mbps"), bad)


def test_scheme_validation():
    with pytest.raises(ValueError):
        BinningScheme(bins_per_decade=0)
    with pytest.raises(ValueError):
        BinningScheme(underflow_below=10.0, overflow_above=1.0)


def test_bin_index_is_monotone_and_matches_vectorized():
    rng = np.random.default_rng(5)
    scheme = default_scheme("min_rtt_ms")
    values = np.sort(10 ** rng.uniform(-3, 6, 5000))
    scalar = [bin_index(scheme, v) for v in values]
    assert all(a <= b for a, b in zip(scalar, scalar[1:]))
    assert scalar == bin_indices(scheme, values).tolist()


def test_centers_lie_inside_their_bins():
    scheme = default_scheme("download_mbps")
    for i in range(-60, 150):
        assert scheme.lower(i) < scheme.center(i) < scheme.upper(i)
        assert bin_index(scheme, scheme.center(i)) == i


# ── Sparse histogram ──────────────────────────────────────────────────────────

def test_insert_one_bin_per_present_metric():
    hist = SparseHistogram().insert(make_record())
    assert len(hist) == 2
    assert hist.total_count() == 2
    key = CellKey("gru", "gru02", 28573, "download_mbps")
    assert hist.bins(key) == {58: 1}


def test_same_record_twice():
    rec = make_record()
    hist = SparseHistogram().insert(rec).insert(rec)
    assert hist.bins(CellKey("gru", "gru02", 28573, "min_rtt_ms")) == {bin_index(default_scheme("min_rtt_ms"), 12.3): 2}


def test_totals_conserve_counts():
    rng = np.random.default_rng(3)
    records = [make_record(download_mbps=float(v)) for v in rng.lognormal(4, 1, 1000)]
    hist = SparseHistogram().insert_all(records)
    key = CellKey("gru", "gru02", 28573, "download_mbps")
    assert hist.totals[key] == 1000
    assert sum(hist.bins(key).values()) == 1000


def test_zero_counts_are_never_stored():
    hist = SparseHistogram()
    with pytest.raises(ValueError):
        hist.add(CellKey("gru", "gru02", 1, "download_mbps"), 3, 0)
    hist.insert_all(make_record(download_mbps=v) for v in (1.0, 10.0, 100.0))
    assert all(count >= 1 for _, count in hist.items())


def test_insert_rejects_unbinned_metric():
    hist = SparseHistogram({"download_mbps": default_scheme("download_mbps")})
    with pytest.raises(ValueError):
        hist.insert(make_record(min_rtt_ms=5.0))


def test_cell_key_validation():
    with pytest.raises(ValueError):
        CellKey("", "gru02", 1, "download_mbps")
    with pytest.raises(ValueError):
        CellKey("gru", "gru02", 0, "download_mbps")


def _random_records(rng, n):
    servers = {"gru": ["gru02", "gru03", "gru06"], "fra": ["fra01", "fra02"]}
    out = []
    for _ in range(n):
        metro = "gru" if rng.random() < 0.6 else "fra"
        server = servers[metro][rng.integers(len(servers[metro]))]
        metrics = {"download_mbps": float(rng.lognormal(4.5, 1.0))}
        if rng.random() < 0.8:
            metrics["min_rtt_ms"] = float(rng.lognormal(3.0, 0.4))
        out.append(make_record(metro=metro, server=server, client_asn=int(rng.choice([3320, 28573, 18881])),
                               ts=day(float(rng.uniform(0, 24))), **metrics))
    return out


def test_merge_over_random_partitions():
    for case in range(200):
        rng = np.random.default_rng(case)
        records = _random_records(rng, 60)
        whole = SparseHistogram().insert_all(records)

        k = int(rng.integers(2, 6))
        assignment = rng.integers(0, k, len(records))
        parts = [SparseHistogram().insert_all(r for r, a in zip(records, assignment) if a == p)
                 for p in range(k)]
        order = rng.permutation(k)
        assert merge_all(parts[i] for i in order) == whole

        a, b, c = parts[0], parts[1], merge_all(parts[2:]) if k > 2 else SparseHistogram()
        assert merge(a, b) == merge(b, a)
        assert merge(merge(a, b), c) == merge(a, merge(b, c))


def test_merge_identity_and_scheme_mismatch():
    hist = SparseHistogram().insert(make_record())
    assert merge(hist, SparseHistogram()) == hist
    with pytest.raises(SchemeMismatchError):
        merge(hist, SparseHistogram(default_schemes(bins_per_decade=20)))
    with pytest.raises(ValueError):
        merge_all([])


def test_cell_distribution():
    hist = SparseHistogram(default_schemes(bins_per_decade=10))
    key = CellKey("gru", "gru02", 28573, "download_mbps")
    assert cell_distribution(hist, key) == ([], 0)
    hist.insert(make_record(download_mbps=5.0))
    assert cell_distribution(hist, key) == ([(6, 1)], 1)
    hist.insert(make_record(download_mbps=50.0))
    entries, total = cell_distribution(hist, key)
    assert total == 2
    assert entries[1][0] - entries[0][0] == 10


def test_metro_isp_totals_sum_servers_and_metrics():
    hist = SparseHistogram().insert_all([
        make_record(server="gru02"), make_record(server="gru03"),
        make_record(server="gru03", client_asn=18881, download_mbps=5.0),
        make_record(metro="fra", server="fra01"),
    ])
    assert metro_isp_totals(hist, "gru") == {28573: 4, 18881: 1}
    assert hist.metros() == ["fra", "gru"]
    assert hist.servers("gru") == ["gru02", "gru03"]
    assert hist.isps("gru") == [18881, 28573]


# ── Snapshots ─────────────────────────────────────────────────────────────────

def test_snapshot_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    schemes = default_schemes(bins_per_decade=25, reference=0.7)
    hist = SparseHistogram(schemes).insert_all(_random_records(rng, 500))
    path = tmp_path / "snap.csv"
    n = save_snapshot(hist, path, "2025-11-24T00:00:00Z", "2025-12-01T00:00:00Z")
    assert n == len(hist)
    snap = load_snapshot(path)
    assert snap.hist == hist
    assert snap.hist.totals == hist.totals
    assert (snap.window_from, snap.window_to) == ("2025-11-24T00:00:00Z", "2025-12-01T00:00:00Z")


def test_empty_snapshot_round_trip(tmp_path):
    path = tmp_path / "empty.csv"
    save_snapshot(SparseHistogram(), path)
    snap = load_snapshot(path)
    assert len(snap.hist) == 0
    assert snap.hist.schemes == default_schemes()
    assert snap.window_from is None


def test_snapshot_errors(tmp_path):
    with pytest.raises(SourceError, match="not found"):
        load_snapshot(tmp_path / "missing.csv")
    other = tmp_path / "records.csv"
    other.write_text("timestamp,metro\n", encoding="utf-8")
    with pytest.raises(SourceError, match="not a histogram snapshot"):
        load_snapshot(other)
