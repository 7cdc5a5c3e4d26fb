"""Key-derived S-boxes and selector-driven per-pixel substitution.

Each pixel is split into its high and low nibble, which address a 16x16 grid
view of the chosen S-box (flat index ``msb * 16 + lsb``).  One of three boxes
is chosen per pixel by a mod-3 chaotic selector consumed in row-major order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chaos import ChaosStream
from .errors import DimensionError
from .image import as_gray_image
from .permutation import argsort_keys, invert_permutation


@dataclass(frozen=True, eq=False)
class SBox:
    table: np.ndarray
    inverse: np.ndarray

    @classmethod
    def from_table(cls, table) -> "SBox":
        table = np.asarray(table, dtype=np.uint8)
        if table.shape != (256,) or np.unique(table).size != 256:
            raise ValueError("an S-box table must be a bijection on 0..255")
        return cls(table=table, inverse=invert_permutation(table))

    @classmethod
    def identity(cls) -> "SBox":
        return cls.from_table(np.arange(256, dtype=np.uint8))

    @property
    def grid(self) -> np.ndarray:
        """16x16 view indexed by ``(msb, lsb)``."""
        return self.table.reshape(16, 16)

    def __eq__(self, other) -> bool:
        return isinstance(other, SBox) and np.array_equal(self.table, other.table)

    __hash__ = None


@dataclass(frozen=True)
class SBoxTriple:
    boxes: tuple[SBox, SBox, SBox]

    def __post_init__(self) -> None:
        if len(self.boxes) != 3:
            raise ValueError("an SBoxTriple holds exactly three boxes")

    @property
    def tables(self) -> np.ndarray:
        return np.stack([b.table for b in self.boxes])

    @property
    def inverses(self) -> np.ndarray:
        return np.stack([b.inverse for b in self.boxes])

    def pairwise_distinct(self) -> bool:
        a, b, c = self.boxes
        return a != b and b != c and a != c


def build_sbox(stream: ChaosStream) -> SBox:
    """Rank permutation of 256 chaotic draws."""
    return SBox.from_table(argsort_keys(stream.take_reals(256)).astype(np.uint8))


def split_nibbles(value: int) -> tuple[int, int]:
    if not 0 <= value <= 255:
        raise ValueError(f"byte value out of range: {value}")
    return value >> 4, value & 0x0F


def _check_selector(img: np.ndarray, selector) -> np.ndarray:
    selector = np.asarray(selector).reshape(-1)
    if selector.size != img.size:
        raise DimensionError(f"selector length {selector.size} != pixel count {img.size}")
    if selector.size and (selector.min() < 0 or selector.max() > 2):
        raise ValueError("selector values must be 0, 1 or 2")
    return selector.reshape(img.shape).astype(np.intp)


def substitute_image(img, triple: SBoxTriple, selector) -> np.ndarray:
    img = as_gray_image(img)
    sel = _check_selector(img, selector)
    # flat table index msb*16 + lsb is the byte itself
    return triple.tables[sel, img]


def unsubstitute_image(img, triple: SBoxTriple, selector) -> np.ndarray:
    img = as_gray_image(img)
    sel = _check_selector(img, selector)
    return triple.inverses[sel, img]


def format_sbox(box: SBox) -> str:
    """16 lines of 16 two-digit hex bytes, row = high nibble."""
    return "\n".join(" ".join(f"{v:02x}" for v in row) for row in box.grid) + "\n"
