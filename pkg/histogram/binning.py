"""
histogram/binning.py — Logarithmic bin geometry shared by all histograms.

Bin ``i`` covers ``[reference·10^(i/b), reference·10^((i+1)/b))`` where ``b`` is
``bins_per_decade``.  Values at or below ``underflow_below`` land in a dedicated
underflow bin, values at or above ``overflow_above`` in an overflow bin.  The
two sentinels are ordinary integers just outside the regular index range, so
they sort to the extremes of every CDF.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from config import DEFAULT_BINS_PER_DECADE, DEFAULT_REFERENCE, METRICS_BY_ID

# Slack when deriving the sentinel indices from the configured bounds.
BOUNDARY_TOLERANCE = 1e-9


@dataclass(frozen=True, slots=True)
class BinningScheme:
    bins_per_decade: int = DEFAULT_BINS_PER_DECADE
    reference: float = DEFAULT_REFERENCE
    underflow_below: float = 0.01
    overflow_above: float = 1e5

    def __post_init__(self):
        if self.bins_per_decade < 1:
            raise ValueError(f"bins_per_decade must be positive, got {self.bins_per_decade}")
        for name in ("reference", "underflow_below", "overflow_above"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v}")
        if not self.underflow_below < self.overflow_above:
            raise ValueError("underflow_below must be smaller than overflow_above")

    # ── geometry ─────────────────────────────────────────────────────────────

    def _position(self, value: float) -> float:
        return self.bins_per_decade * math.log10(value / self.reference)

    @property
    def underflow_index(self) -> int:
        return math.floor(self._position(self.underflow_below) + BOUNDARY_TOLERANCE) - 1

    @property
    def overflow_index(self) -> int:
        return math.ceil(self._position(self.overflow_above) - BOUNDARY_TOLERANCE)

    def is_sentinel(self, index: int) -> bool:
        return index in (self.underflow_index, self.overflow_index)

    def edge(self, index: int) -> float:
        """Lower boundary of regular bin ``index``; every binning decision compares against it."""
        return self.reference * 10 ** (index / self.bins_per_decade)

    def lower(self, index: int) -> float:
        if index == self.underflow_index:
            return 0.0
        if index == self.overflow_index:
            return self.overflow_above
        return self.edge(index)

    def upper(self, index: int) -> float:
        if index == self.underflow_index:
            return self.underflow_below
        if index == self.overflow_index:
            return math.inf
        return self.edge(index + 1)

    def center(self, index: int) -> float:
        """Geometric center; sentinels use their boundary value."""
        if index == self.underflow_index:
            return self.underflow_below
        if index == self.overflow_index:
            return self.overflow_above
        return self.reference * 10 ** ((index + 0.5) / self.bins_per_decade)

    def centers(self, indices) -> np.ndarray:
        idx = np.asarray(indices, dtype=float)
        out = self.reference * np.power(10.0, (idx + 0.5) / self.bins_per_decade)
        out[idx == self.underflow_index] = self.underflow_below
        out[idx == self.overflow_index] = self.overflow_above
        return out

    def to_dict(self) -> dict:
        return {
            "bins_per_decade": self.bins_per_decade,
            "reference": self.reference,
            "underflow_below": self.underflow_below,
            "overflow_above": self.overflow_above,
        }


def bin_index(scheme: BinningScheme, value: float) -> int:
    """Bin for a single value; monotone non-decreasing in ``value``."""
    if isinstance(value, bool) or not math.isfinite(value):
        raise ValueError(f"cannot bin non-finite value {value!r}")
    if value <= 0:
        # Zero is a legal loss rate; it has no logarithm and counts as underflow.
        if value == 0:
            return scheme.underflow_index
        raise ValueError(f"cannot bin negative value {value!r}")
    if value <= scheme.underflow_below:
        return scheme.underflow_index
    if value >= scheme.overflow_above:
        return scheme.overflow_index
    idx = math.floor(scheme._position(value))
    # log10 may round across an edge; settle against the edge values themselves.
    if value >= scheme.edge(idx + 1):
        idx += 1
    elif value < scheme.edge(idx):
        idx -= 1
    # Clamp against rounding at the range edges.
    return min(max(idx, scheme.underflow_index + 1), scheme.overflow_index - 1)


def bin_indices(scheme: BinningScheme, values) -> np.ndarray:
    """Vectorized ``bin_index`` for arrays of values already known to be valid."""
    v = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(v)) or np.any(v < 0):
        raise ValueError("cannot bin negative or non-finite values")
    with np.errstate(divide="ignore"):
        pos = scheme.bins_per_decade * np.log10(np.where(v > 0, v, 1.0) / scheme.reference)
    idx = np.floor(pos).astype(np.int64)
    uniq = np.unique(np.concatenate([idx, idx + 1]))
    edges = np.array([scheme.edge(int(i)) for i in uniq])
    lo = edges[np.searchsorted(uniq, idx)]
    hi = edges[np.searchsorted(uniq, idx + 1)]
    idx = idx + (v >= hi).astype(np.int64) - (v < lo).astype(np.int64)
    idx = np.clip(idx, scheme.underflow_index + 1, scheme.overflow_index - 1)
    idx[v <= scheme.underflow_below] = scheme.underflow_index
    idx[v >= scheme.overflow_above] = scheme.overflow_index
    return idx


def default_scheme(metric: str, bins_per_decade: int = DEFAULT_BINS_PER_DECADE,
                   reference: float = DEFAULT_REFERENCE) -> BinningScheme:
    """Scheme for a registered metric with its configured under/overflow bounds."""
    entry = METRICS_BY_ID[metric]
    return BinningScheme(
        bins_per_decade=bins_per_decade,
        reference=reference,
        underflow_below=entry["underflow_below"],
        overflow_above=entry["overflow_above"],
    )


def default_schemes(bins_per_decade: int = DEFAULT_BINS_PER_DECADE,
                    reference: float = DEFAULT_REFERENCE) -> dict[str, BinningScheme]:
    return {m: default_scheme(m, bins_per_decade, reference) for m in METRICS_BY_ID}
