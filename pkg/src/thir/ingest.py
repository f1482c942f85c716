"""Image loading, deterministic resizing, channel splitting, dataset scanning.

Images are uint8 RGB arrays of shape (H, W, 3); channel grids are float64
arrays of shape (H, W) on the 0-255 scale. Dataset records carry a dense id,
the file path, a benign/malignant/unknown label, and the microscope
magnification when one can be parsed from the path.
"""

import csv
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, EmptyDatasetError, ManifestError

__all__ = [
    "LABEL_BENIGN",
    "LABEL_MALIGNANT",
    "LABEL_UNKNOWN",
    "MAG_UNSPECIFIED",
    "DatasetRecord",
    "label_name",
    "load_image",
    "resize",
    "split_channels",
    "scan_dataset",
]

LABEL_BENIGN = 0
LABEL_MALIGNANT = 1
LABEL_UNKNOWN = 255

MAG_UNSPECIFIED = 0

_LABEL_NAMES = {LABEL_BENIGN: "benign", LABEL_MALIGNANT: "malignant", LABEL_UNKNOWN: "unknown"}

_IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}

# magnification token like "40X" / "100x" in a path, not embedded in a longer number
_MAG_TOKEN = re.compile(r"(?<![0-9])(400|200|100|40)[xX](?![0-9])")
# BreaKHis filename convention: ...-40-012.png
_MAG_FILENAME = re.compile(r"-(400|200|100|40)-\d+\.[A-Za-z]+$")


def label_name(label: int) -> str:
    return _LABEL_NAMES.get(label, "unknown")


@dataclass(frozen=True)
class DatasetRecord:
    """One discovered image with its parsed label and magnification."""

    id: int
    path: str
    label: int
    magnification: int


def load_image(path) -> np.ndarray:
    """Decode a PNG or JPEG file into a (H, W, 3) uint8 RGB array.

    Grayscale and palette sources are expanded to three identical channels.
    Raises FileNotFoundError for a missing file and DecodeError for a file
    that exists but cannot be decoded.
    """
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"no such image file: {p}")
    try:
        with Image.open(p) as im:
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DecodeError(f"cannot decode {p}: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise DecodeError(f"unexpected decoded shape {arr.shape} for {p}")
    return arr


def resize(img: np.ndarray, width: int, height: int) -> np.ndarray:
    """Bilinear resize with half-pixel-center sampling.

    Source coordinates are sx = (dx + 0.5) * (src_w / dst_w) - 0.5 (same for
    rows), clamped to the valid range; the four neighboring pixels are blended
    and the result is rounded to the nearest integer (halves round up) and
    clamped to [0, 255]. Resizing to the source size reproduces the input
    exactly.
    """
    if width < 1 or height < 1:
        raise ValueError(f"target size must be at least 1x1, got {width}x{height}")
    src = np.asarray(img, dtype=np.float64)
    src_h, src_w = src.shape[:2]

    sx = (np.arange(width) + 0.5) * (src_w / width) - 0.5
    sy = (np.arange(height) + 0.5) * (src_h / height) - 0.5
    sx = np.clip(sx, 0.0, src_w - 1.0)
    sy = np.clip(sy, 0.0, src_h - 1.0)
    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    x1 = np.minimum(x0 + 1, src_w - 1)
    y1 = np.minimum(y0 + 1, src_h - 1)
    fx = (sx - x0)[None, :, None]
    fy = (sy - y0)[:, None, None]

    top = src[np.ix_(y0, x0)] * (1.0 - fx) + src[np.ix_(y0, x1)] * fx
    bottom = src[np.ix_(y1, x0)] * (1.0 - fx) + src[np.ix_(y1, x1)] * fx
    out = top * (1.0 - fy) + bottom * fy
    out = np.floor(out + 0.5)
    np.clip(out, 0.0, 255.0, out=out)
    return out.astype(np.uint8)


def split_channels(img: np.ndarray) -> list[np.ndarray]:
    """Split an RGB image into three float64 channel grids in (R, G, B) order.

    Intensities keep the 0-255 scale.
    """
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) image, got shape {arr.shape}")
    return [arr[:, :, c].astype(np.float64) for c in range(3)]


def _parse_label(path: Path) -> int:
    hit = LABEL_UNKNOWN
    for part in path.parts:
        low = part.lower()
        # deepest matching segment wins
        if "malignant" in low:
            hit = LABEL_MALIGNANT
        elif "benign" in low:
            hit = LABEL_BENIGN
    if hit != LABEL_UNKNOWN:
        return hit
    name = path.name
    if "_M_" in name:
        return LABEL_MALIGNANT
    if "_B_" in name:
        return LABEL_BENIGN
    return LABEL_UNKNOWN


def _parse_magnification(path: Path) -> int:
    m = _MAG_TOKEN.search(str(path))
    if m:
        return int(m.group(1))
    m = _MAG_FILENAME.search(path.name)
    if m:
        return int(m.group(1))
    return MAG_UNSPECIFIED


def _read_manifest(manifest_path: Path, root: Path) -> dict[str, tuple[int, int]]:
    labels = {"benign": LABEL_BENIGN, "malignant": LABEL_MALIGNANT}
    mags = {"40", "100", "200", "400"}
    table: dict[str, tuple[int, int]] = {}
    try:
        with open(manifest_path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            fields = [f.strip() for f in (reader.fieldnames or [])]
            if fields != ["path", "label", "magnification"]:
                raise ManifestError(
                    f"manifest header must be path,label,magnification, got {fields}"
                )
            for lineno, row in enumerate(reader, start=2):
                raw_path = (row.get("path") or "").strip()
                raw_label = (row.get("label") or "").strip().lower()
                raw_mag = (row.get("magnification") or "").strip()
                if not raw_path or raw_label not in labels or raw_mag not in mags:
                    raise ManifestError(f"bad manifest row at line {lineno}: {row}")
                value = (labels[raw_label], int(raw_mag))
                table[raw_path] = value
                table[(root / raw_path).resolve().as_posix()] = value
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {manifest_path}: {exc}") from exc
    return table


def scan_dataset(root, manifest=None) -> list[DatasetRecord]:
    """Recursively discover images under ``root`` and label them.

    Labels and magnifications come from path segments ("benign"/"malignant",
    "40X".."400X") or BreaKHis filename tokens ("_B_"/"_M_", "-40-"). A
    manifest CSV with columns path,label,magnification overrides path parsing
    for the files it lists. Records are sorted by path and given dense ids.
    """
    root = Path(root)
    if not root.exists():
        raise FileNotFoundError(f"dataset root does not exist: {root}")
    table = _read_manifest(Path(manifest), root) if manifest is not None else {}

    paths = sorted(
        (p for p in root.rglob("*") if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES),
        key=lambda p: str(p),
    )
    if not paths:
        raise EmptyDatasetError(f"no PNG/JPEG files found under {root}")

    records = []
    for i, p in enumerate(paths):
        entry = table.get(p.resolve().as_posix())
        if entry is None:
            try:
                entry = table.get(p.relative_to(root).as_posix())
            except ValueError:
                entry = None
        if entry is not None:
            label, mag = entry
        else:
            label, mag = _parse_label(p), _parse_magnification(p)
        records.append(DatasetRecord(id=i, path=str(p), label=label, magnification=mag))
    return records
