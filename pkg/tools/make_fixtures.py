"""Regenerate the 256x256 gray test images in tests/data/ from scikit-image samples.

Needs scikit-image; the package itself does not.
"""

from pathlib import Path

import numpy as np
from skimage import color, data, transform

OUT = Path(__file__).resolve().parents[1] / "tests" / "data"


def to_u8_256(img: np.ndarray) -> np.ndarray:
    small = transform.resize(img, (256, 256), anti_aliasing=True, preserve_range=True)
    return np.clip(np.rint(small), 0, 255).astype(np.uint8)


def write_pgm(img: np.ndarray, path: Path) -> None:
    h, w = img.shape
    path.write_bytes(b"P5\n%d %d\n255\n" % (w, h) + img.tobytes())


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    write_pgm(to_u8_256(data.camera()), OUT / "cameraman.pgm")
    cat = color.rgb2gray(data.chelsea()) * 255.0
    h, w = cat.shape
    side = min(h, w)
    top, left = (h - side) // 2, (w - side) // 2
    write_pgm(to_u8_256(cat[top:top + side, left:left + side]), OUT / "chelsea.pgm")


if __name__ == "__main__":
    main()
