"""Betti curves and per-image topological descriptors.

A Betti curve samples, at R evenly spaced filtration values, how many loops
(dimension-1 classes) are alive: a pair (b, d) counts at sample X when
b <= X <= d, endpoints inclusive. The per-image descriptor concatenates the
R-, G-, and B-channel curves into one vector of 3R loop counts.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cubical import PersistenceDiagram, build_filtration, compute_persistence
from .ingest import split_channels

__all__ = [
    "RANGE_PER_IMAGE",
    "RANGE_FULL",
    "BettiCurveSpec",
    "BettiCurve",
    "betti_curve",
    "channel_curves",
    "descriptor",
]

# sampling range policies
RANGE_PER_IMAGE = "per-image"  # min birth .. max death of this channel's loops
RANGE_FULL = "full"  # fixed 0 .. 255 regardless of content

_POLICIES = (RANGE_PER_IMAGE, RANGE_FULL)


@dataclass(frozen=True)
class BettiCurveSpec:
    """Curve resolution (samples per channel) and sampling-range policy."""

    resolution: int = 200
    range_policy: str = RANGE_PER_IMAGE

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError(f"resolution must be >= 1, got {self.resolution}")
        if self.range_policy not in _POLICIES:
            raise ValueError(f"range_policy must be one of {_POLICIES}, got {self.range_policy!r}")


class BettiCurve(NamedTuple):
    samples: np.ndarray  # (R,) filtration values, nondecreasing
    counts: np.ndarray  # (R,) loops alive at each sample


def betti_curve(diagram: PersistenceDiagram, spec: BettiCurveSpec) -> BettiCurve:
    """Sample the dimension-1 Betti curve of one diagram.

    Zero-persistence pairs (b == d) and all dimension-0 content are dropped
    first. With no loops left, both samples and counts are all zero. Sample
    points are X_j = lo + j*(hi-lo)/(R-1) for j = 0..R-1 (X_0 = lo when R is
    1), where lo/hi are the retained min birth / max death under the
    per-image policy, or 0/255 under the full-scale policy.
    """
    r = spec.resolution
    rows = diagram.in_dimension(1)
    rows = rows[rows[:, 0] < rows[:, 1]]
    if rows.shape[0] == 0:
        return BettiCurve(np.zeros(r), np.zeros(r, dtype=np.int64))

    births = np.sort(rows[:, 0])
    deaths = np.sort(rows[:, 1])
    if spec.range_policy == RANGE_FULL:
        lo, hi = 0.0, 255.0
    else:
        lo, hi = births[0], deaths[-1]

    if r == 1 or lo == hi:
        samples = np.full(r, lo)
    else:
        samples = lo + np.arange(r) * (hi - lo) / (r - 1)
    counts = np.searchsorted(births, samples, side="right") - np.searchsorted(
        deaths, samples, side="left"
    )
    return BettiCurve(samples, counts.astype(np.int64))


def channel_curves(img: np.ndarray, spec: BettiCurveSpec) -> list[BettiCurve]:
    """Betti curve of each RGB channel, in (R, G, B) order."""
    return [
        betti_curve(compute_persistence(build_filtration(ch)), spec)
        for ch in split_channels(img)
    ]


def descriptor(img: np.ndarray, spec: BettiCurveSpec) -> np.ndarray:
    """3R-length topological fingerprint of an RGB image.

    Channel blocks are concatenated in (R, G, B) order; values are loop
    counts stored as float64.
    """
    curves = channel_curves(img, spec)
    return np.concatenate([c.counts for c in curves]).astype(np.float64)
