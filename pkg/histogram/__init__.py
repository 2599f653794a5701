"""histogram package — log binning, sparse histograms and snapshots."""
from histogram.binning import BinningScheme, bin_index, bin_indices, default_scheme, default_schemes
from histogram.snapshot import Snapshot, load_snapshot, save_snapshot
from histogram.sparse import (
    CellDistribution,
    CellKey,
    SchemeMismatchError,
    SparseHistogram,
    cell_distribution,
    insert,
    merge,
    merge_all,
    metro_isp_totals,
)

__all__ = [
    "BinningScheme", "bin_index", "bin_indices", "default_scheme", "default_schemes",
    "Snapshot", "load_snapshot", "save_snapshot",
    "CellDistribution", "CellKey", "SchemeMismatchError", "SparseHistogram",
    "cell_distribution", "insert", "merge", "merge_all", "metro_isp_totals",
]
