"""Chaotic row/column shuffling and its inverse."""

from __future__ import annotations

import numpy as np

from .chaos import ChaosStream
from .errors import DimensionError
from .image import as_gray_image


def argsort_keys(keys) -> np.ndarray:
    """Indices ordering ``keys`` ascending; equal keys keep their original order."""
    keys = np.asarray(keys, dtype=np.float64)
    if keys.ndim != 1 or keys.size == 0:
        raise DimensionError("keys must be a non-empty 1-D sequence")
    return np.argsort(keys, kind="stable")


def invert_permutation(perm) -> np.ndarray:
    perm = np.asarray(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size, dtype=perm.dtype)
    return inv


def is_permutation(perm) -> bool:
    perm = np.asarray(perm)
    return perm.ndim == 1 and np.array_equal(np.sort(perm), np.arange(perm.size))


def _check_perms(img: np.ndarray, row_perm, col_perm) -> tuple[np.ndarray, np.ndarray]:
    row_perm = np.asarray(row_perm)
    col_perm = np.asarray(col_perm)
    h, w = img.shape
    if row_perm.shape != (h,) or col_perm.shape != (w,):
        raise DimensionError(
            f"permutation lengths ({row_perm.size}, {col_perm.size}) do not match image {h}x{w}"
        )
    return row_perm, col_perm


def shuffle_image(img, row_perm, col_perm) -> np.ndarray:
    """``out[i, j] = img[row_perm[i], col_perm[j]]``."""
    img = as_gray_image(img)
    row_perm, col_perm = _check_perms(img, row_perm, col_perm)
    return img[row_perm, :][:, col_perm]


def unshuffle_image(img, row_perm, col_perm) -> np.ndarray:
    img = as_gray_image(img)
    row_perm, col_perm = _check_perms(img, row_perm, col_perm)
    return img[invert_permutation(row_perm), :][:, invert_permutation(col_perm)]


def chaotic_shuffle(
    img, row_stream: ChaosStream, col_stream: ChaosStream
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw H row keys and W column keys, argsort each and shuffle.

    Returns ``(shuffled, row_perm, col_perm)``.
    """
    img = as_gray_image(img)
    h, w = img.shape
    row_perm = argsort_keys(row_stream.take_reals(h))
    col_perm = argsort_keys(col_stream.take_reals(w))
    return shuffle_image(img, row_perm, col_perm), row_perm, col_perm
