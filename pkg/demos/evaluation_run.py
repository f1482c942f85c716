# ## Scoring retrieval like a benchmark table
#
# Splits a labeled archive into train/test, indexes the train side only,
# retrieves top-K neighbors for every test image, and reports
# accuracy/recall/precision/F1 (majority vote, malignant positive) plus mean
# precision@K, per K. `thir evaluate` wraps exactly this flow per
# magnification.

import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

from thir import (
    BettiCurveSpec,
    EvalReport,
    SplitSpec,
    build_index,
    evaluate,
    render_report,
    scan_dataset,
    split_records,
)

workdir = Path(tempfile.mkdtemp(prefix="thir_eval_"))
data = workdir / "dataset"


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


# ## A separable two-class archive

for i in range(12):
    solid = np.full((64, 64, 3), (25 + 12 * i, 60 + 9 * i, 100), dtype=np.uint8)
    save(solid, data / "benign" / f"solid_{i:02d}.png")
for i in range(12):
    save(rings(64, 5 + i % 4), data / "malignant" / f"rings_{i:02d}.png")

records = scan_dataset(data)
print(f"dataset: {len(records)} records")

# ## Split, index the train side, evaluate the test side

split = SplitSpec(train_fraction=0.8, seed=42)
train, test = split_records(records, split)
print(f"split: {len(train)} train / {len(test)} test (seed {split.seed})")

spec = BettiCurveSpec(resolution=30)
index = build_index(train, spec, resize_dims=(64, 64), workers=4)
rows = evaluate(index, test, ks=[1, 3, 5])

report = EvalReport(
    rows=rows,
    metadata={
        "train_fraction": split.train_fraction,
        "seed": split.seed,
        "positive_class": "malignant",
        "resolution": spec.resolution,
    },
)

# ## Reports in all three formats

print("\ncsv:")
print(render_report(report, "csv"))
print("markdown:")
print(render_report(report, "markdown"))
print("json (truncated):")
print(render_report(report, "json")[:400], "...")
