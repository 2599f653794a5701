"""KS distance, geometric mean, spread and pain against raw-sample oracles."""
import math

import numpy as np
import pytest
from scipy.stats import ks_2samp

from histogram.binning import BinningScheme, default_scheme
from histogram.sparse import SchemeMismatchError
from stats.difference import (
    BinnedDistribution,
    DifferenceStat,
    EmptyDistributionError,
    cdf,
    difference,
    geometric_mean,
    ks_distance,
    pain_score,
    spread,
)
from tests.conftest import raw_geometric_mean, raw_ks

SCHEME = default_scheme("download_mbps")
# Bin i has its geometric center at exactly 10^(i/30).
CENTERED = BinningScheme(bins_per_decade=30, reference=10 ** (-0.5 / 30))


def _dist(counts: dict[int, int], scheme=SCHEME) -> BinnedDistribution:
    return BinnedDistribution.from_counts(scheme, counts)


def _oracle_cases():
    for k in range(20):
        rng = np.random.default_rng(2024 + k)
        sigma = 0.3 + 0.7 * k / 19
        ratio = 1.0 + (k * 7 % 20) / 19
        a = rng.lognormal(math.log(50.0), sigma, 10_000)
        b = rng.lognormal(math.log(50.0 * ratio), sigma, 10_000)
        yield a, b


# ── Oracles ───────────────────────────────────────────────────────────────────

def test_sort_merge_oracle_matches_scipy():
    rng = np.random.default_rng(0)
    a, b = rng.lognormal(3.9, 0.5, 3000), rng.lognormal(4.1, 0.5, 2000)
    assert raw_ks(a, b) == pytest.approx(ks_2samp(a, b).statistic, abs=1e-12)


def test_binned_ks_tracks_raw_ks():
    for a, b in _oracle_cases():
        binned = ks_distance(BinnedDistribution.from_values(SCHEME, a),
                             BinnedDistribution.from_values(SCHEME, b))
        assert abs(binned - raw_ks(a, b)) <= 0.02


def test_binned_geometric_mean_tracks_raw():
    for a, b in _oracle_cases():
        for sample in (a, b):
            gm = geometric_mean(BinnedDistribution.from_values(SCHEME, sample))
            assert abs(gm / raw_geometric_mean(sample) - 1.0) <= 0.03


def test_lognormal_example_pair():
    rng = np.random.default_rng(50)
    a = rng.lognormal(math.log(50), 0.5, 10_000)
    b = rng.lognormal(math.log(60), 0.5, 10_000)
    da, db = BinnedDistribution.from_values(SCHEME, a), BinnedDistribution.from_values(SCHEME, b)
    assert abs(ks_distance(da, db) - raw_ks(a, b)) <= 0.02
    assert geometric_mean(da) == pytest.approx(raw_geometric_mean(a), rel=0.03)


# ── cdf ───────────────────────────────────────────────────────────────────────

def test_cdf_steps():
    assert cdf(_dist({40: 5})) == [(40, 1.0)]
    assert cdf(_dist({1: 1, 7: 1})) == [(1, 0.5), (7, 1.0)]
    assert cdf(_dist({0: 2, 1: 3, 2: 5})) == [(0, 0.2), (1, 0.5), (2, 1.0)]


# ── KS ────────────────────────────────────────────────────────────────────────

def test_ks_identity_and_disjoint_support():
    a = _dist({10: 3, 11: 4, 15: 1})
    assert ks_distance(a, a) == 0.0
    assert ks_distance(_dist({1: 5, 4: 2}), _dist({5: 1, 9: 9})) == 1.0


def _random_dist(rng) -> BinnedDistribution:
    bins = rng.choice(np.arange(20, 60), size=int(rng.integers(1, 12)), replace=False)
    return _dist({int(i): int(rng.integers(1, 50)) for i in bins})


def test_ks_symmetry_and_triangle():
    rng = np.random.default_rng(9)
    for _ in range(300):
        a, b, c = _random_dist(rng), _random_dist(rng), _random_dist(rng)
        assert ks_distance(a, b) == ks_distance(b, a)
        assert ks_distance(a, c) <= ks_distance(a, b) + ks_distance(b, c) + 1e-12


def test_ks_is_shift_invariant():
    rng = np.random.default_rng(10)
    for _ in range(100):
        a, b = _random_dist(rng), _random_dist(rng)
        d = int(rng.integers(-15, 15))
        assert ks_distance(a.shifted(d), b.shifted(d)) == ks_distance(a, b)


def test_ks_requires_same_scheme_and_data():
    with pytest.raises(SchemeMismatchError):
        ks_distance(_dist({1: 1}), _dist({1: 1}, BinningScheme(bins_per_decade=10)))
    with pytest.raises(EmptyDistributionError):
        ks_distance(_dist({}), _dist({1: 1}))


# ── Geometric mean and spread ─────────────────────────────────────────────────

def test_geometric_mean_of_centers():
    assert geometric_mean(_dist({30: 5}, CENTERED)) == pytest.approx(10.0)
    assert geometric_mean(_dist({0: 4, 60: 4}, CENTERED)) == pytest.approx(10.0)


def test_spread_identity_and_swap():
    a, b = _dist({50: 3, 52: 1}), _dist({40: 2, 61: 2})
    assert spread(a, a) == (1.0, 1.0)
    r, folded = spread(a, b)
    r_swapped, folded_swapped = spread(b, a)
    assert r_swapped == pytest.approx(1.0 / r)
    assert folded_swapped == pytest.approx(folded)
    assert folded >= 1.0


def test_spread_known_ratio():
    a = _dist({60: 1}, CENTERED)
    b = _dist({30: 1}, CENTERED)
    assert spread(a, b) == pytest.approx((10.0, 10.0))
    assert spread(b, a) == pytest.approx((0.1, 10.0))


def test_spread_shift_covariance():
    rng = np.random.default_rng(12)
    for _ in range(50):
        a, b = _random_dist(rng), _random_dist(rng)
        d = int(rng.integers(-10, 10))
        expected = spread(a, b)[0] * 10 ** (d / SCHEME.bins_per_decade)
        assert spread(a.shifted(d), b)[0] == pytest.approx(expected, rel=1e-9)


def test_geometric_mean_empty():
    with pytest.raises(EmptyDistributionError):
        geometric_mean(_dist({}))
    with pytest.raises(EmptyDistributionError):
        cdf(_dist({}))


# ── difference / pain ─────────────────────────────────────────────────────────

def _stat(ks=0.0, folded=1.0) -> DifferenceStat:
    return DifferenceStat(ks_distance=ks, spread=folded, spread_folded=folded,
                          pain_ks=10.0 * ks, n_a=100, n_b=100)


def test_pain_modes():
    assert pain_score(_stat(ks=0.3), "ks") == pytest.approx(3.0)
    assert pain_score(_stat(folded=1.8), "spread") == 1.8
    with pytest.raises(ValueError):
        pain_score(_stat(), "area")


def test_identical_distributions_have_no_pain():
    a = _dist({45: 10, 46: 20, 50: 5})
    stat = difference(a, a)
    assert pain_score(stat, "ks") == 0.0
    assert pain_score(stat, "spread") == 1.0
    assert (stat.n_a, stat.n_b, stat.truncated) == (35, 35, False)


def test_pain_is_ten_times_ks():
    stat = difference(_dist({40: 7, 41: 3}), _dist({41: 2, 44: 9}))
    assert stat.pain_ks == 10.0 * stat.ks_distance


def test_sentinel_mass_marks_truncation():
    heavy = _dist({SCHEME.overflow_index: 3, 50: 97})
    light = _dist({SCHEME.overflow_index: 1, 50: 99})
    assert difference(heavy, _dist({50: 10})).truncated
    assert not difference(light, _dist({50: 10})).truncated
    with pytest.raises(ValueError):
        heavy.shifted(1)


def test_distribution_invariants():
    with pytest.raises(ValueError):
        BinnedDistribution(SCHEME, ((3, 1), (2, 1)), 2)
    with pytest.raises(ValueError):
        BinnedDistribution(SCHEME, ((3, 1),), 5)
    with pytest.raises(ValueError):
        BinnedDistribution(SCHEME, ((3, 0),), 0)
