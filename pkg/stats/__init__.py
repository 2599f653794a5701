"""stats package — KS distance, geometric means, spread and pain scores."""
from stats.difference import (
    PAIN_MODES,
    BinnedDistribution,
    DifferenceStat,
    EmptyDistributionError,
    PainMode,
    cdf,
    difference,
    geometric_mean,
    ks_distance,
    pain_score,
    spread,
)

__all__ = [
    "PAIN_MODES", "BinnedDistribution", "DifferenceStat", "EmptyDistributionError", "PainMode",
    "cdf", "difference", "geometric_mean", "ks_distance", "pain_score", "spread",
]
