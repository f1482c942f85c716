"""Image-level query pipeline shared by the CLI and the HTTP service."""

import numpy as np

from .betti import channel_curves
from .index import Index
from .ingest import label_name, resize
from .retrieval import top_k

__all__ = ["query_descriptor", "query_response", "normalized_copy"]


def query_descriptor(index: Index, img: np.ndarray) -> tuple[np.ndarray, list]:
    """Descriptor and per-channel curves of a query image under the index's
    own spec and resize dims."""
    w, h = index.resize_dims
    curves = channel_curves(resize(img, w, h), index.spec)
    vec = np.concatenate([c.counts for c in curves]).astype(np.float64)
    return vec, curves


def normalized_copy(index: Index) -> Index:
    """Index with unit-length descriptor rows (zero rows stay zero)."""
    mat = index.descriptors.astype(np.float64)
    norms = np.linalg.norm(mat, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return Index(
        spec=index.spec,
        resize_dims=index.resize_dims,
        records=index.records,
        descriptors=(mat / norms).astype(np.float32),
    )


def query_response(index: Index, img: np.ndarray, k: int, normalize: bool = False) -> dict:
    """Run one query and shape the result as the service/CLI JSON payload.

    The same dict is serialized by ``thir query --format json`` and by the
    HTTP query endpoint, so the two stay field-for-field identical.
    """
    vec, curves = query_descriptor(index, img)
    search_index = index
    qvec = vec
    if normalize:
        search_index = normalized_copy(index)
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            qvec = vec / norm
    ranked = top_k(search_index, qvec, k)

    results = []
    result_curves = []
    for r in ranked:
        rec = index.records[r.entry_id]
        results.append(
            {
                "id": r.entry_id,
                "label": label_name(r.label),
                "magnification": rec.magnification,
                "distance": r.distance,
                "image_url": f"/api/images/{r.entry_id}",
            }
        )
        result_curves.append([float(x) for x in index.descriptors[r.entry_id]])

    return {
        "k": k,
        "results": results,
        "query_curves": {
            "values": [int(c) for curve in curves for c in curve.counts],
            "samples": {
                "r": [float(x) for x in curves[0].samples],
                "g": [float(x) for x in curves[1].samples],
                "b": [float(x) for x in curves[2].samples],
            },
        },
        "result_curves": result_curves,
    }
