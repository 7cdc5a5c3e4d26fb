"""Key schedule and the shuffle -> substitute -> mask-XOR pipeline.

Key schedule
------------
A master stream is started from ``(r, x0)`` and warmed up for 1000 steps.  Its
next seven outputs ``d_1..d_7`` seed the stage streams, in this order: row
permutation, column permutation, S-box 1, S-box 2, S-box 3, selector, mask.
Stage ``s`` starts from ``x_s = (d_s + s * SEED_OFFSET) mod 1``; a draw whose
``x_s`` is exactly 0 is skipped.  Every stage stream shares the master ``r``
and applies its own 1000-step warm-up before its first draw.

The offset matters: ``d_{s+1} = LSS(d_s)``, so unoffset seeds would make each
stage stream a one-step shift of the previous one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .automata import DEFAULT_ITERATIONS, evolve_mask, seed_mask_matrix, tile_mask
from .chaos import DEFAULT_WARMUP, ChaosParams, ChaosStream, mod3_selector_stream
from .errors import DomainError, KeyFormatError
from .image import as_gray_image, check_block_multiple
from .permutation import argsort_keys, shuffle_image, unshuffle_image
from .substitution import SBoxTriple, build_sbox, substitute_image, unsubstitute_image


@dataclass(frozen=True)
class MasterKey:
    params: ChaosParams
    iterations: int = DEFAULT_ITERATIONS

    def __post_init__(self) -> None:
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise DomainError(f"iteration count must be an integer >= 1, got {self.iterations!r}")

    @classmethod
    def from_values(cls, r: float, x0: float, iterations: int = DEFAULT_ITERATIONS) -> "MasterKey":
        return cls(ChaosParams(float(r), float(x0)), int(iterations))

    def to_text(self) -> str:
        return f"r={self.params.r!r} x0={self.params.x0!r} I={self.iterations}\n"


@dataclass(frozen=True)
class KeySchedule:
    row_perm: ChaosParams
    col_perm: ChaosParams
    sbox1: ChaosParams
    sbox2: ChaosParams
    sbox3: ChaosParams
    selector: ChaosParams
    mask: ChaosParams

    def stream(self, name: str) -> ChaosStream:
        return ChaosStream(getattr(self, name), DEFAULT_WARMUP)

    def seeds(self) -> list[float]:
        return [getattr(self, f.name).x0 for f in fields(self)]


STAGES = tuple(f.name for f in fields(KeySchedule))
SEED_OFFSET = 0.6180339887498949  # (sqrt(5) - 1) / 2


def derive_schedule(key: MasterKey) -> KeySchedule:
    master = ChaosStream(key.params, DEFAULT_WARMUP)
    r = key.params.r
    subs = []
    while len(subs) < len(STAGES):
        x = (master.next_real() + (len(subs) + 1) * SEED_OFFSET) % 1.0
        if x != 0.0:
            subs.append(ChaosParams(r, x))
    return KeySchedule(*subs)


@dataclass
class CipherTrace:
    shuffled: np.ndarray | None = None
    substituted: np.ndarray | None = None
    mask: np.ndarray | None = None
    ciphertext: np.ndarray | None = None


@dataclass
class KeyMaterial:
    """Everything the pipeline draws from a key for one image size."""

    row_perm: np.ndarray
    col_perm: np.ndarray
    triple: SBoxTriple
    selector: np.ndarray
    mask: np.ndarray
    mask_tile: np.ndarray


def key_material(key: MasterKey, height: int, width: int) -> KeyMaterial:
    sched = derive_schedule(key)
    row_perm = argsort_keys(sched.stream("row_perm").take_reals(height))
    col_perm = argsort_keys(sched.stream("col_perm").take_reals(width))
    triple = SBoxTriple(tuple(build_sbox(sched.stream(n)) for n in ("sbox1", "sbox2", "sbox3")))
    selector = mod3_selector_stream(sched.stream("selector"), height * width)
    mask = evolve_mask(seed_mask_matrix(sched.stream("mask")), key.iterations)
    return KeyMaterial(row_perm, col_perm, triple, selector, mask, tile_mask(mask, height, width))


def _prepare(img) -> np.ndarray:
    img = as_gray_image(img)
    check_block_multiple(img)
    return img


def encrypt_traced(img, key: MasterKey) -> tuple[np.ndarray, CipherTrace]:
    img = _prepare(img)
    km = key_material(key, *img.shape)
    shuffled = shuffle_image(img, km.row_perm, km.col_perm)
    substituted = substitute_image(shuffled, km.triple, km.selector)
    ciphertext = substituted ^ km.mask_tile
    return ciphertext, CipherTrace(shuffled, substituted, km.mask_tile, ciphertext)


def encrypt(img, key: MasterKey) -> np.ndarray:
    return encrypt_traced(img, key)[0]


def decrypt_traced(img, key: MasterKey) -> tuple[np.ndarray, CipherTrace]:
    img = _prepare(img)
    km = key_material(key, *img.shape)
    substituted = img ^ km.mask_tile
    shuffled = unsubstitute_image(substituted, km.triple, km.selector)
    plaintext = unshuffle_image(shuffled, km.row_perm, km.col_perm)
    return plaintext, CipherTrace(shuffled, substituted, km.mask_tile, img)


def decrypt(img, key: MasterKey) -> np.ndarray:
    return decrypt_traced(img, key)[0]


_KEY_FIELD = re.compile(r"^(r|x0|I)=(\S+)$")


def parse_key_text(text: str) -> MasterKey:
    """Parse ``r=<decimal> x0=<decimal> I=<integer>`` (any whitespace between fields)."""
    values: dict[str, str] = {}
    for token in text.split():
        m = _KEY_FIELD.match(token)
        if not m:
            raise KeyFormatError(f"unrecognised key field {token!r}")
        if m.group(1) in values:
            raise KeyFormatError(f"duplicate key field {m.group(1)!r}")
        values[m.group(1)] = m.group(2)
    missing = {"r", "x0", "I"} - values.keys()
    if missing:
        raise KeyFormatError(f"missing key field(s): {', '.join(sorted(missing))}")
    return _key_from_strings(values["r"], values["x0"], values["I"])


def parse_key_triplet(text: str) -> MasterKey:
    """Parse the command-line form ``r,x0,I``; ``r,x0`` uses the default I."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 2:
        parts.append(str(DEFAULT_ITERATIONS))
    if len(parts) != 3:
        raise KeyFormatError(f"expected r,x0,I but got {text!r}")
    return _key_from_strings(*parts)


# the strtod subset we accept: no hex floats, inf/nan or digit separators
_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_INTEGER = re.compile(r"[+-]?\d+\Z")


def _key_from_strings(r: str, x0: str, iterations: str) -> MasterKey:
    for name, text in (("r", r), ("x0", x0)):
        if not _DECIMAL.match(text):
            raise KeyFormatError(f"malformed decimal for {name}: {text!r}")
    if not _INTEGER.match(iterations):
        raise KeyFormatError(f"malformed integer for I: {iterations!r}")
    return MasterKey(ChaosParams(float(r), float(x0)), int(iterations))


def load_key_file(path: str | Path) -> MasterKey:
    return parse_key_text(Path(path).read_text())
