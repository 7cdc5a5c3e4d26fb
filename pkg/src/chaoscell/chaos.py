"""Logistic-Sine System (LSS) iteration and the integer streams derived from it.

All arithmetic is IEEE-754 binary64.  The step is evaluated in a fixed order,
``(r*x)*(1-x) + ((4-r)*sin(pi*x))/4`` followed by a single ``mod 1``, so that
any implementation following the same order reproduces the streams bit for bit
(modulo ``sin`` differences in the platform libm).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import DomainError

DEFAULT_WARMUP = 1000

_PI = math.pi
_sin = math.sin


@dataclass(frozen=True)
class ChaosParams:
    """Control parameter ``r`` in (0, 4) and initial state ``x0`` in (0, 1)."""

    r: float
    x0: float

    def __post_init__(self) -> None:
        check_r(self.r)
        if not (0.0 < self.x0 < 1.0):
            raise DomainError(f"x0 must lie in the open interval (0, 1), got {self.x0!r}")


def check_r(r: float) -> None:
    if not (0.0 < r < 4.0):
        raise DomainError(f"r must lie in the open interval (0, 4), got {r!r}")


def lss_step(params: ChaosParams | float, x: float) -> float:
    """One LSS iterate: ``(r x (1-x) + (4-r) sin(pi x) / 4) mod 1``.

    ``params`` may be a :class:`ChaosParams` or a bare ``r``.
    """
    r = params.r if isinstance(params, ChaosParams) else float(params)
    check_r(r)
    if not (0.0 <= x < 1.0):
        raise DomainError(f"state x must lie in [0, 1), got {x!r}")
    return (r * x * (1.0 - x) + (4.0 - r) * _sin(_PI * x) / 4.0) % 1.0


def logistic_step(r: float, x: float) -> float:
    """Logistic component on its own (sine term forced to zero)."""
    return (r * x * (1.0 - x)) % 1.0


def sine_step(r: float, x: float) -> float:
    """Sine map ``r sin(pi x) / 4`` on its own."""
    return (r * _sin(_PI * x) / 4.0) % 1.0


def _lss_unchecked(r: float, x: float) -> float:
    return (r * x * (1.0 - x) + (4.0 - r) * _sin(_PI * x) / 4.0) % 1.0


MAPS: dict[str, Callable[[float, float], float]] = {
    "lss": _lss_unchecked,
    "logistic": logistic_step,
    "sine": sine_step,
}


class ChaosStream:
    """Mutable LSS iterator.

    Not safe for concurrent mutation; build one stream per consumer instead.
    """

    __slots__ = ("params", "state", "warmup_done")

    def __init__(self, params: ChaosParams, warmup: int = DEFAULT_WARMUP):
        if warmup < 0:
            raise DomainError(f"warmup must be >= 0, got {warmup}")
        self.params = params
        self.state = params.x0
        self.warmup_done = False
        self._advance(warmup)
        self.warmup_done = True

    def _advance(self, n: int) -> None:
        r = self.params.r
        c = 4.0 - r
        x = self.state
        for _ in range(n):
            x = (r * x * (1.0 - x) + c * _sin(_PI * x) / 4.0) % 1.0
        self.state = x

    def next_real(self) -> float:
        r = self.params.r
        x = self.state
        x = (r * x * (1.0 - x) + (4.0 - r) * _sin(_PI * x) / 4.0) % 1.0
        self.state = x
        return x

    def take_reals(self, n: int) -> np.ndarray:
        """The next ``n`` iterates as a float64 array, in draw order."""
        if n < 0:
            raise DomainError(f"n must be >= 0, got {n}")
        r = self.params.r
        c = 4.0 - r
        x = self.state
        out = [0.0] * n
        for i in range(n):
            x = (r * x * (1.0 - x) + c * _sin(_PI * x) / 4.0) % 1.0
            out[i] = x
        self.state = x
        return np.array(out, dtype=np.float64)

    def skip(self, n: int) -> None:
        if n < 0:
            raise DomainError(f"n must be >= 0, got {n}")
        self._advance(n)

    def __iter__(self) -> Iterator[float]:
        while True:
            yield self.next_real()


def stream_new(params: ChaosParams, warmup: int = DEFAULT_WARMUP) -> ChaosStream:
    return ChaosStream(params, warmup)


def round_half_away(values: np.ndarray) -> np.ndarray:
    """Round to nearest integer, ties away from zero (exact for binary64 input)."""
    values = np.asarray(values, dtype=np.float64)
    mag = np.abs(values)
    whole = np.floor(mag)
    # mag - whole is exact, so the tie test never suffers from the x + 0.5 rounding trap.
    rounded = whole + (mag - whole >= 0.5)
    return np.copysign(rounded, values).astype(np.int64)


def mod3_values(values: Iterable[float] | np.ndarray) -> np.ndarray:
    """Map reals to selectors ``round(v * 1000) mod 3``."""
    scaled = np.asarray(values, dtype=np.float64) * 1000.0
    return (round_half_away(scaled) % 3).astype(np.uint8)


def mod3_selector_stream(stream: ChaosStream, n: int) -> np.ndarray:
    return mod3_values(stream.take_reals(n))


def bifurcation_scan(
    r_min: float,
    r_max: float,
    r_steps: int,
    warmup: int = DEFAULT_WARMUP,
    samples_per_r: int = 200,
    x0: float = 0.37,
    map_name: str = "lss",
) -> np.ndarray:
    """Long-run iterates over a uniform grid of ``r``.

    Returns an ``(r_steps * samples_per_r, 2)`` array of ``(r, x)`` rows.
    ``map_name`` picks ``"lss"``, ``"logistic"`` or ``"sine"``.
    """
    check_r(r_min)
    check_r(r_max)
    if not r_min < r_max:
        raise DomainError(f"need r_min < r_max, got {r_min!r} >= {r_max!r}")
    if r_steps < 1:
        raise DomainError(f"r_steps must be >= 1, got {r_steps}")
    if warmup < 0 or samples_per_r < 0:
        raise DomainError("warmup and samples_per_r must be >= 0")
    if not (0.0 < x0 < 1.0):
        raise DomainError(f"x0 must lie in (0, 1), got {x0!r}")
    try:
        step = MAPS[map_name]
    except KeyError:
        raise DomainError(f"unknown map {map_name!r}; expected one of {sorted(MAPS)}") from None

    grid = np.linspace(r_min, r_max, r_steps) if r_steps > 1 else np.array([r_min])
    rows = np.empty((r_steps * samples_per_r, 2), dtype=np.float64)
    k = 0
    for r in grid:
        r = float(r)
        x = x0
        for _ in range(warmup):
            x = step(r, x)
        for _ in range(samples_per_r):
            x = step(r, x)
            rows[k, 0] = r
            rows[k, 1] = x
            k += 1
    return rows


def write_xy_csv(rows: np.ndarray, path, header: tuple[str, str] = ("r", "x")) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for a, b in rows:
            writer.writerow([format(float(a), ".17g"), format(float(b), ".17g")])
