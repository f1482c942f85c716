"""Synthetic image fixtures shared across the test modules."""

from pathlib import Path

import numpy as np
from PIL import Image


def save_image(arr: np.ndarray, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(arr).save(path)
    return path


def solid_rgb(size: int, rgb: tuple[int, int, int]) -> np.ndarray:
    return np.full((size, size, 3), rgb, dtype=np.uint8)


def ring_rgb(size: int, n_rings: int, dark: int = 20, light: int = 200, step: int = 3) -> np.ndarray:
    """Concentric 1px square frames of ``dark`` on a ``light`` background.

    Each frame encloses one hole, so every channel carries exactly n_rings
    loops, each born at ``dark`` and filled at ``light``.
    """
    ys, xs = np.indices((size, size))
    border_dist = np.minimum.reduce([ys, xs, size - 1 - ys, size - 1 - xs])
    gray = np.full((size, size), light, dtype=np.uint8)
    for k in range(n_rings):
        margin = 2 + step * k
        if 2 * margin + 2 >= size:
            raise ValueError(f"{n_rings} rings do not fit in a {size}x{size} image")
        gray[border_dist == margin] = dark
    return np.stack([gray, gray, gray], axis=-1)


def make_separable_dataset(
    root, n_per_class: int = 20, size: int = 64, ring_counts=(5, 6, 7, 8)
) -> Path:
    """Benign solid-color images vs malignant ring-textured images.

    Solid images have all-zero descriptors; a ring image with n frames has
    the constant descriptor n, so the two classes sit at least
    min(ring_counts)*sqrt(3R) apart while intra-class distances stay at
    (max-min)*sqrt(3R).
    """
    root = Path(root)
    for i in range(n_per_class):
        rgb = (30 + 9 * i, 60 + 7 * i, 90 + 5 * i)
        save_image(solid_rgb(size, rgb), root / "benign" / f"solid_{i:03d}.png")
    for i in range(n_per_class):
        n_rings = ring_counts[i % len(ring_counts)]
        save_image(ring_rgb(size, n_rings), root / "malignant" / f"rings_{i:03d}.png")
    return root
