"""
histogram/sparse.py — Sparse multidimensional histogram.

Axes: metro × server × client ASN × metric × log bin.  Only non-zero bins are
stored.  Each inserted record adds exactly one count to exactly one bin per
metric it carries, so a stream can be split into partitions, binned
independently and merged back with ``merge``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from histogram.binning import BinningScheme, bin_index, default_schemes
from ingest.records import MeasurementRecord


class SchemeMismatchError(ValueError):
    """Two histograms (or distributions) were binned with different schemes."""


@dataclass(frozen=True, slots=True, order=True)
class CellKey:
    metro: str
    server_id: str
    client_asn: int
    metric: str

    def __post_init__(self):
        if not self.metro or not self.server_id or not self.metric:
            raise ValueError(f"incomplete cell key: {self}")
        if self.client_asn < 1:
            raise ValueError(f"invalid client ASN in cell key: {self.client_asn}")


class CellDistribution(NamedTuple):
    entries: list[tuple[int, int]]
    total: int


class SparseHistogram:
    """Counts keyed by (CellKey, bin index); zero counts are never stored."""

    def __init__(self, schemes: dict[str, BinningScheme] | None = None):
        self.schemes: dict[str, BinningScheme] = dict(schemes) if schemes else default_schemes()
        self._cells: dict[CellKey, dict[int, int]] = {}
        self.totals: dict[CellKey, int] = {}

    # ── mutation ─────────────────────────────────────────────────────────────

    def add(self, key: CellKey, index: int, count: int = 1) -> None:
        if count < 1:
            raise ValueError(f"count must be positive, got {count}")
        bins = self._cells.setdefault(key, {})
        bins[index] = bins.get(index, 0) + count
        self.totals[key] = self.totals.get(key, 0) + count

    def insert(self, record: MeasurementRecord) -> SparseHistogram:
        for metric, value in record.metrics.items():
            scheme = self.schemes.get(metric)
            if scheme is None:
                raise ValueError(f"no binning scheme for metric {metric!r}")
            key = CellKey(record.metro, record.server_id, record.client_asn, metric)
            self.add(key, bin_index(scheme, value))
        return self

    def insert_all(self, records: Iterable[MeasurementRecord]) -> SparseHistogram:
        for r in records:
            self.insert(r)
        return self

    # ── reads ────────────────────────────────────────────────────────────────

    def items(self) -> Iterator[tuple[tuple[CellKey, int], int]]:
        """((cell, bin), count) pairs in sorted order."""
        for key in sorted(self._cells):
            bins = self._cells[key]
            for idx in sorted(bins):
                yield (key, idx), bins[idx]

    def as_dict(self) -> dict[tuple[CellKey, int], int]:
        return dict(self.items())

    def cells(self) -> list[CellKey]:
        return sorted(self._cells)

    def bins(self, key: CellKey) -> dict[int, int]:
        return dict(self._cells.get(key, {}))

    def metros(self) -> list[str]:
        return sorted({k.metro for k in self._cells})

    def servers(self, metro: str) -> list[str]:
        return sorted({k.server_id for k in self._cells if k.metro == metro})

    def isps(self, metro: str) -> list[int]:
        return sorted({k.client_asn for k in self._cells if k.metro == metro})

    def total_count(self) -> int:
        return sum(self.totals.values())

    def __len__(self) -> int:
        return sum(len(b) for b in self._cells.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseHistogram):
            return NotImplemented
        return self.schemes == other.schemes and self._cells == other._cells

    def __repr__(self) -> str:
        return (f"SparseHistogram(cells={len(self._cells)}, bins={len(self)}, "
                f"total={self.total_count()})")


def insert(hist: SparseHistogram, record: MeasurementRecord) -> SparseHistogram:
    return hist.insert(record)


def merge(a: SparseHistogram, b: SparseHistogram) -> SparseHistogram:
    """Keywise sum of two histograms binned with identical schemes."""
    if a.schemes != b.schemes:
        raise SchemeMismatchError("cannot merge histograms with different binning schemes")
    out = SparseHistogram(a.schemes)
    for src in (a, b):
        for key, bins in src._cells.items():
            for idx, count in bins.items():
                out.add(key, idx, count)
    return out


def merge_all(parts: Iterable[SparseHistogram]) -> SparseHistogram:
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to merge")
    out = parts[0]
    for p in parts[1:]:
        out = merge(out, p)
    return out


def cell_distribution(hist: SparseHistogram, key: CellKey) -> CellDistribution:
    bins = hist._cells.get(key)
    if not bins:
        return CellDistribution([], 0)
    entries = sorted(bins.items())
    return CellDistribution(entries, hist.totals[key])


def metro_isp_totals(hist: SparseHistogram, metro: str) -> dict[int, int]:
    """Tests per client ASN in a metro, summed across servers and metrics."""
    totals: defaultdict[int, int] = defaultdict(int)
    for key, n in hist.totals.items():
        if key.metro == metro:
            totals[key.client_asn] += n
    return dict(totals)
