"""Exact Euclidean top-K search over an index (the online phase)."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, EmptyIndexError
from .index import Index

__all__ = ["RankedResult", "euclidean", "top_k"]


@dataclass(frozen=True)
class RankedResult:
    entry_id: int
    distance: float
    label: int
    path: str


def euclidean(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean distance between two descriptors, accumulated in float64."""
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.ndim != 1 or av.shape != bv.shape:
        raise DimensionMismatchError(f"shape mismatch: {av.shape} vs {bv.shape}")
    d = av - bv
    return float(np.sqrt(np.sum(d * d)))


def top_k(index: Index, query: np.ndarray, k: int, exclude_ids=None) -> list[RankedResult]:
    """The k nearest entries to ``query`` by Euclidean distance.

    Exhaustive scan over the whole matrix; results are sorted by
    (distance, entry id) so ties are stable, and entries in ``exclude_ids``
    never appear. Returns min(k, eligible) results.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if len(index) == 0:
        raise EmptyIndexError("index has no entries")
    q = np.asarray(query, dtype=np.float64)
    if q.ndim != 1 or q.shape[0] != index.dim:
        raise DimensionMismatchError(
            f"query length {q.shape} does not match index dim {index.dim}"
        )

    diff = index.descriptors - q  # float32 - float64 upcasts to float64
    dists = np.sqrt(np.sum(diff * diff, axis=1))

    ids = np.arange(len(index))
    if exclude_ids:
        mask = ~np.isin(ids, list(exclude_ids))
        ids = ids[mask]
        dists = dists[mask]
    order = np.lexsort((ids, dists))[: min(k, ids.size)]

    out = []
    for pos in order:
        rec = index.records[ids[pos]]
        out.append(
            RankedResult(
                entry_id=int(ids[pos]),
                distance=float(dists[pos]),
                label=rec.label,
                path=rec.path,
            )
        )
    return out
