"""
analysis/interpret.py — Heuristic reading of a flagged server pair.

Throughput: a sharp mode at the slower server's upper edge while the faster
server still carries tests beyond it reads as a per-flow policer (every test
flow meets its own cap); anything else that is flagged reads as congestion,
whose cross traffic smears the mode.  minRTT differences read as suboptimal
routing.
"""
from __future__ import annotations

from analysis.constants import (
    CLEAN,
    CONGESTION,
    EDGE_MIN_SHARE,
    FAST_ABOVE_SHARE,
    MID_PATH_DIFFERENCE,
    PER_FLOW_POLICER,
    POLICER_MODE_SHARE,
    SUBOPTIMAL_ROUTING,
)
from config import METRICS_BY_ID
from stats.difference import BinnedDistribution, DifferenceStat


def is_flagged(stat: DifferenceStat, flag_ks: float, flag_spread: float) -> bool:
    return stat.ks_distance >= flag_ks or stat.spread_folded >= flag_spread


def upper_edge(dist: BinnedDistribution) -> int | None:
    """Highest regular bin holding at least ``EDGE_MIN_SHARE`` of the tests."""
    edge = None
    for idx, count in dist.entries:
        if dist.scheme.is_sentinel(idx):
            continue
        if count / dist.total >= EDGE_MIN_SHARE:
            edge = idx
    return edge


def has_policer_signature(slow: BinnedDistribution, fast: BinnedDistribution) -> bool:
    edge = upper_edge(slow)
    if edge is None:
        return False
    mode = sum(c for i, c in slow.entries if edge - 1 <= i <= edge) / slow.total
    beyond = sum(c for i, c in fast.entries if i > edge) / fast.total
    return mode >= POLICER_MODE_SHARE and beyond >= FAST_ABOVE_SHARE


def classify(metric: str, a: BinnedDistribution, b: BinnedDistribution,
             stat: DifferenceStat, flagged: bool) -> tuple[str, str | None]:
    """Return (label, suspect side) where side is ``"a"``, ``"b"`` or None."""
    if not flagged:
        return CLEAN, None

    kind = METRICS_BY_ID[metric]["kind"]
    if kind == "throughput":
        # Lower geometric mean is the constrained path.
        slow, fast, side = (a, b, "a") if stat.spread < 1.0 else (b, a, "b")
        if has_policer_signature(slow, fast):
            return PER_FLOW_POLICER, side
        return CONGESTION, side
    if kind == "latency":
        return SUBOPTIMAL_ROUTING, "a" if stat.spread > 1.0 else "b"
    return MID_PATH_DIFFERENCE, None
