"""Rule 30 cellular automata: the 1-D reference rule and the 16x16 byte mask.

The mask evolution treats each column of the byte matrix as a 16-cell
automaton on each of the 8 bit planes: the "left" neighbour of cell ``(i, j)``
is ``(i - 1, j)`` and the "right" neighbour ``(i + 1, j)``.  Cells outside the
matrix read as zero and every row is updated synchronously.  Columns never
interact, so an implementation may evolve them in parallel.
"""

from __future__ import annotations

import numpy as np

from .chaos import ChaosStream
from .errors import DimensionError
from .image import BLOCK
from .permutation import argsort_keys

MASK_SHAPE = (BLOCK, BLOCK)
DEFAULT_ITERATIONS = 1


def rule30_local(left: int, center: int, right: int) -> int:
    return left ^ (center | right)


def _rule30_rows(cells: np.ndarray) -> np.ndarray:
    """One synchronous Rule 30 step along axis 0 with zero boundaries.

    Works on bits or bytes alike, since XOR and OR are bitwise.
    """
    left = np.zeros_like(cells)
    right = np.zeros_like(cells)
    left[1:] = cells[:-1]
    right[:-1] = cells[1:]
    return left ^ (cells | right)


def evolve_1d(cells, steps: int) -> np.ndarray:
    """Trajectory of a 1-D Rule 30 row, shape ``(steps + 1, n)``, initial row first."""
    row = np.asarray(cells, dtype=np.uint8)
    if row.ndim != 1 or row.size < 1:
        raise DimensionError("cells must be a non-empty 1-D sequence")
    if row.size and row.max() > 1:
        raise ValueError("cells must be binary")
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    out = np.empty((steps + 1, row.size), dtype=np.uint8)
    out[0] = row
    for t in range(steps):
        row = _rule30_rows(row)
        out[t + 1] = row
    return out


def seed_mask_matrix(stream: ChaosStream) -> np.ndarray:
    """16x16 arrangement (row-major) of the rank permutation of 256 draws."""
    return argsort_keys(stream.take_reals(256)).astype(np.uint8).reshape(MASK_SHAPE)


def evolve_mask(m, iterations: int) -> np.ndarray:
    m = np.asarray(m, dtype=np.uint8)
    if m.shape != MASK_SHAPE:
        raise DimensionError(f"mask must be {MASK_SHAPE}, got {m.shape}")
    if iterations < 0:
        raise ValueError(f"iterations must be >= 0, got {iterations}")
    m = m.copy()
    for _ in range(iterations):
        m = _rule30_rows(m)
    return m


def tile_mask(m, height: int, width: int) -> np.ndarray:
    m = np.asarray(m, dtype=np.uint8)
    if m.shape != MASK_SHAPE:
        raise DimensionError(f"mask must be {MASK_SHAPE}, got {m.shape}")
    if height < 1 or width < 1 or height % BLOCK or width % BLOCK:
        raise DimensionError(f"height and width must be positive multiples of {BLOCK}")
    return np.tile(m, (height // BLOCK, width // BLOCK))


def ca_pattern(width: int, steps: int) -> np.ndarray:
    """Classic Rule 30 triangle grown from a single centred live cell."""
    if width < 1:
        raise ValueError("width must be >= 1")
    row = np.zeros(width, dtype=np.uint8)
    row[width // 2] = 1
    return evolve_1d(row, steps)


def format_pattern(rows: np.ndarray) -> str:
    return "".join("".join("1" if b else "0" for b in row) + "\n" for row in rows)
