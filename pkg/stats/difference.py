"""
stats/difference.py — Difference statistics between two binned distributions.

    ks_distance      max vertical gap between the two CDFs, evaluated at the
                     union of occupied bin boundaries (exact integer arithmetic)
    geometric_mean   exp of the count-weighted mean log of bin geometric centers
    spread           GM_a / GM_b, folded to max(r, 1/r) for ranking
    pain             10 × KS, or the folded spread
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Mapping

import numpy as np

from config import PAIN_KS_SCALE, SENTINEL_MASS_WARN
from histogram.binning import BinningScheme, bin_indices
from histogram.sparse import CellKey, SchemeMismatchError, SparseHistogram, cell_distribution

PainMode = Literal["ks", "spread"]
PAIN_MODES: tuple[str, ...] = ("ks", "spread")


class EmptyDistributionError(ValueError):
    """A statistic was requested for a distribution with no samples."""


@dataclass(frozen=True, slots=True)
class BinnedDistribution:
    scheme: BinningScheme
    entries: tuple[tuple[int, int], ...]
    total: int

    def __post_init__(self):
        prev = None
        for idx, count in self.entries:
            if count < 1:
                raise ValueError(f"bin {idx} has non-positive count {count}")
            if prev is not None and idx <= prev:
                raise ValueError("bin indices must be strictly increasing")
            prev = idx
        if self.total != sum(c for _, c in self.entries):
            raise ValueError("total does not match the sum of bin counts")

    @classmethod
    def from_counts(cls, scheme: BinningScheme, counts: Mapping[int, int]) -> BinnedDistribution:
        entries = tuple(sorted((int(i), int(c)) for i, c in counts.items() if c))
        return cls(scheme, entries, sum(c for _, c in entries))

    @classmethod
    def from_cell(cls, hist: SparseHistogram, key: CellKey) -> BinnedDistribution:
        entries, total = cell_distribution(hist, key)
        return cls(hist.schemes[key.metric], tuple(entries), total)

    @classmethod
    def from_values(cls, scheme: BinningScheme, values: Iterable[float]) -> BinnedDistribution:
        idx, counts = np.unique(bin_indices(scheme, np.fromiter(values, dtype=float)),
                                return_counts=True)
        return cls.from_counts(scheme, dict(zip(idx.tolist(), counts.tolist())))

    def shifted(self, bins: int) -> BinnedDistribution:
        """Same counts moved by a whole number of regular bins (sentinels excluded)."""
        if any(self.scheme.is_sentinel(i) for i, _ in self.entries):
            raise ValueError("cannot shift a distribution with sentinel mass")
        return BinnedDistribution(self.scheme, tuple((i + bins, c) for i, c in self.entries),
                                  self.total)

    def sentinel_fraction(self) -> float:
        if not self.total:
            return 0.0
        n = sum(c for i, c in self.entries if self.scheme.is_sentinel(i))
        return n / self.total

    def __bool__(self) -> bool:
        return self.total > 0


@dataclass(frozen=True, slots=True)
class DifferenceStat:
    ks_distance: float
    spread: float
    spread_folded: float
    pain_ks: float
    n_a: int
    n_b: int
    truncated: bool = False

    @property
    def pain_spread(self) -> float:
        return self.spread_folded

    def to_dict(self) -> dict:
        return {
            "ks_distance": self.ks_distance,
            "spread": self.spread,
            "spread_folded": self.spread_folded,
            "pain_ks": self.pain_ks,
            "n_a": self.n_a,
            "n_b": self.n_b,
            "truncated": self.truncated,
        }


# ── Operations ────────────────────────────────────────────────────────────────

def _require(dist: BinnedDistribution, what: str) -> None:
    if not dist.total:
        raise EmptyDistributionError(f"{what}: empty distribution")


def _same_scheme(a: BinnedDistribution, b: BinnedDistribution) -> None:
    if a.scheme != b.scheme:
        raise SchemeMismatchError("distributions were binned with different schemes")


def cdf(dist: BinnedDistribution) -> list[tuple[int, float]]:
    """Step function: (bin index, cumulative fraction at that bin's upper boundary)."""
    _require(dist, "cdf")
    out, running = [], 0
    for idx, count in dist.entries:
        running += count
        out.append((idx, running / dist.total))
    return out


def ks_distance(a: BinnedDistribution, b: BinnedDistribution) -> float:
    _same_scheme(a, b)
    _require(a, "ks_distance")
    _require(b, "ks_distance")
    ca = dict(a.entries)
    cb = dict(b.entries)
    na, nb = a.total, b.total
    run_a = run_b = 0
    best = 0
    # |Fa − Fb| · na · nb stays integral, so ties and identities are exact.
    for idx in sorted(ca.keys() | cb.keys()):
        run_a += ca.get(idx, 0)
        run_b += cb.get(idx, 0)
        gap = abs(run_a * nb - run_b * na)
        if gap > best:
            best = gap
    return best / (na * nb)


def geometric_mean(dist: BinnedDistribution) -> float:
    _require(dist, "geometric_mean")
    idx = np.array([i for i, _ in dist.entries], dtype=float)
    w = np.array([c for _, c in dist.entries], dtype=float)
    logs = np.log(dist.scheme.centers(idx))
    return float(np.exp(np.sum(w * logs) / np.sum(w)))


def spread(a: BinnedDistribution, b: BinnedDistribution) -> tuple[float, float]:
    """(GM_a / GM_b, max(r, 1/r))."""
    _same_scheme(a, b)
    r = geometric_mean(a) / geometric_mean(b)
    return r, max(r, 1.0 / r)


def difference(a: BinnedDistribution, b: BinnedDistribution) -> DifferenceStat:
    ks = ks_distance(a, b)
    r, folded = spread(a, b)
    truncated = max(a.sentinel_fraction(), b.sentinel_fraction()) > SENTINEL_MASS_WARN
    return DifferenceStat(
        ks_distance=ks,
        spread=r,
        spread_folded=folded,
        pain_ks=PAIN_KS_SCALE * ks,
        n_a=a.total,
        n_b=b.total,
        truncated=truncated,
    )


def pain_score(stat: DifferenceStat, mode: PainMode) -> float:
    if mode == "ks":
        return stat.pain_ks
    if mode == "spread":
        return stat.spread_folded
    raise ValueError(f"unknown pain mode {mode!r} (expected one of {', '.join(PAIN_MODES)})")
