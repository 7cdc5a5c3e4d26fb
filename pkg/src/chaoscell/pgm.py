"""Binary PGM (P5, maxval 255) reading and canonical writing."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import PgmHeaderError, PgmMaxvalError, PgmTruncatedError, PgmUnsupportedFormat
from .image import as_gray_image

# Netpbm header: magic, width, height, maxval separated by whitespace or
# comments, then exactly one whitespace byte before the raster.
_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n)*(\S+)")


def parse_pgm(data: bytes) -> np.ndarray:
    magic = data[:2]
    if magic != b"P5":
        if len(magic) == 2 and magic[:1] == b"P":
            raise PgmUnsupportedFormat(f"unsupported format {magic.decode('latin-1')!r}; only binary P5 is read")
        raise PgmHeaderError("not a PGM file")
    pos = 2
    values = []
    for _ in range(3):
        m = _TOKEN.match(data, pos)
        if not m:
            raise PgmHeaderError("truncated header")
        tok = m.group(1)
        if not tok.isdigit():
            raise PgmHeaderError(f"malformed header field {tok!r}")
        values.append(int(tok))
        pos = m.end()
    width, height, maxval = values
    if width < 1 or height < 1:
        raise PgmHeaderError(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise PgmMaxvalError(f"maxval must be 255, got {maxval}")
    if pos >= len(data):
        raise PgmTruncatedError("missing pixel payload")
    if not data[pos : pos + 1].isspace():
        raise PgmHeaderError("header must end with one whitespace byte")
    payload = data[pos + 1 :]
    need = width * height
    if len(payload) < need:
        raise PgmTruncatedError(f"payload has {len(payload)} bytes, expected {need}")
    return np.frombuffer(payload, dtype=np.uint8, count=need).reshape(height, width).copy()


def read_pgm(path: str | Path) -> np.ndarray:
    return parse_pgm(Path(path).read_bytes())


def encode_pgm(img) -> bytes:
    img = as_gray_image(img)
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(img).tobytes()


def write_pgm(img, path: str | Path) -> None:
    Path(path).write_bytes(encode_pgm(img))
