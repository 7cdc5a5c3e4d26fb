"""Gray-image validation shared by every stage."""

from __future__ import annotations

import numpy as np

from .errors import DimensionError

BLOCK = 16


def as_gray_image(img) -> np.ndarray:
    """Validate and return ``img`` as a 2-D uint8 array (no copy when already one)."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D gray image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not (np.issubdtype(arr.dtype, np.integer) or arr.dtype == np.bool_):
            raise TypeError(f"gray images hold integer pixels, got dtype {arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("pixel values must lie in 0..255")
        arr = arr.astype(np.uint8)
    return arr


def check_block_multiple(img: np.ndarray) -> None:
    h, w = img.shape
    if h % BLOCK or w % BLOCK:
        raise DimensionError(f"image dimensions must be multiples of {BLOCK}, got {h}x{w}")
