# ## Index, persist, query: the full retrieval loop
#
# Builds a small synthetic archive on disk, extracts its descriptor index,
# round-trips the index through the binary file format, and runs a few
# queries, mirroring what `thir extract` and `thir query` do.

import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

from thir import (
    BettiCurveSpec,
    build_index,
    load_image,
    load_index,
    save_index,
    scan_dataset,
    stats,
    top_k,
)
from thir.search import query_response

workdir = Path(tempfile.mkdtemp(prefix="thir_demo_"))
data = workdir / "archive"

# ## A toy archive: solid tiles vs ring-textured tiles


def save(arr, path):
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(arr).save(path)


def rings(size, n, dark=20, light=200):
    ys, xs = np.indices((size, size))
    border = np.minimum.reduce([ys, xs, size - 1 - ys, size - 1 - xs])
    gray = np.full((size, size), light, dtype=np.uint8)
    for k in range(n):
        gray[border == 2 + 3 * k] = dark
    return np.stack([gray, gray, gray], axis=-1)


for i in range(4):
    solid = np.full((48, 48, 3), (30 + 50 * i, 80, 140), dtype=np.uint8)
    save(solid, data / "benign" / f"solid_{i}.png")
for i in range(4):
    save(rings(48, 2 + i), data / "malignant" / f"rings_{i}.png")

# ## Offline phase: scan, fingerprint, persist

records = scan_dataset(data)
spec = BettiCurveSpec(resolution=50)
index = build_index(records, spec, resize_dims=(48, 48), workers=4)
index_path = workdir / "archive.thir"
save_index(index, index_path)
print(f"indexed {len(index)} images -> {index_path}")

reloaded = load_index(index_path)
assert reloaded == index
print("binary round-trip is exact")

s = stats(reloaded)
print(f"stats: {s.total} entries, labels {s.labels}, dim {s.dim}")

# ## Online phase: queries
#
# An archived image retrieves itself at distance zero; a fresh ring image
# lands among its ring-textured peers.

archived = load_image(records[0].path)
vec_response = query_response(reloaded, archived, k=3)
print("\nquery with an archived benign tile:")
for r in vec_response["results"]:
    print(f"  id {r['id']:>2}  {r['label']:<10} distance {r['distance']:.3f}")
assert vec_response["results"][0]["distance"] == 0.0

fresh = rings(48, 3)
print("\nquery with a fresh 3-ring tile:")
for r in query_response(reloaded, fresh, k=3)["results"]:
    print(f"  id {r['id']:>2}  {r['label']:<10} distance {r['distance']:.3f}")

# ## The same scan, expressed with the lower-level API

from thir import descriptor, resize

q = descriptor(resize(fresh, *reloaded.resize_dims), reloaded.spec)
for r in top_k(reloaded, q, 3):
    print(f"  top_k -> id {r.entry_id}, label {r.label}, distance {r.distance:.3f}")
